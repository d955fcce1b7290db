//! Exact rational arithmetic helpers.
//!
//! Coupling distances and every reported fraction are kept as exact
//! rationals end to end; tie-breaking is rank-sensitive and floating
//! point rounding would manufacture or destroy ties.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

pub type Rational = num_rational::BigRational;

/// Exact ratio from two machine integers.
pub fn ratio(num: u64, den: u64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_int(value: u64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Mean of a list of counts; `None` on empty input.
pub fn mean(values: &[u64]) -> Option<Rational> {
    if values.is_empty() {
        return None;
    }
    let sum: u64 = values.iter().sum();
    Some(ratio(sum, values.len() as u64))
}

/// Median of a list of counts; the median of an even-length list is the
/// average of the two middle values. `None` on empty input.
pub fn median(values: &[u64]) -> Option<Rational> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        Some(from_int(sorted[mid]))
    } else {
        Some(ratio(sorted[mid - 1] + sorted[mid], 2))
    }
}

/// Canonical exact rendering: reduced `num/den`, or a bare integer when
/// the denominator is one.
pub fn render_exact(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Fixed-point decimal rendering, rounding half away from zero.
pub fn render_decimal(value: &Rational, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = value * Rational::from_integer(scale);
    let rounded = scaled.round().to_integer();
    let negative = rounded.is_negative();
    let digits = rounded.abs().to_string();
    let digits = if digits.len() <= places as usize {
        format!("{:0>width$}", digits, width = places as usize + 1)
    } else {
        digits
    };
    let split = digits.len() - places as usize;
    let sign = if negative { "-" } else { "" };
    if places == 0 {
        format!("{sign}{digits}")
    } else {
        format!("{sign}{}.{}", &digits[..split], &digits[split..])
    }
}

/// Lossy conversion for display-only consumers.
pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Parse `a/b` or a bare integer into an exact rational.
pub fn parse_exact(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((num, den)) => {
            let num: u64 = num.trim().parse().ok()?;
            let den: u64 = den.trim().parse().ok()?;
            if den == 0 {
                None
            } else {
                Some(ratio(num, den))
            }
        }
        None => {
            let value: u64 = text.parse().ok()?;
            Some(from_int(value))
        }
    }
}
