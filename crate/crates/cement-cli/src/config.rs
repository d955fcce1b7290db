//! Run configuration: a flat key-value config file plus flag
//! overrides. Defaults follow the tool's standard parameters (N = 100,
//! mean aggregation, 10% selection budget, top-5 links).

use std::fs;
use std::path::Path;

use cement_core::applications::{ConfidentMean, FilterScope, MaturityLevel, SelectionMode};
use cement_core::coupling::Aggregator;
use cement_core::error::{Error, Result};
use cement_core::extract::classify::ClassifierConfig;
use cement_core::rational::{self, Rational};

/// Selection budget: an absolute test count or a fraction of the
/// available tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Budget {
    Count(usize),
    Fraction(u64, u64),
}

impl Budget {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some((num, den)) = text.split_once('/') {
            let num: u64 = num
                .trim()
                .parse()
                .map_err(|_| Error::config(format!("bad budget fraction `{text}`")))?;
            let den: u64 = den
                .trim()
                .parse()
                .map_err(|_| Error::config(format!("bad budget fraction `{text}`")))?;
            if den == 0 || num == 0 {
                return Err(Error::config(format!(
                    "budget fraction `{text}` must be positive"
                )));
            }
            Ok(Budget::Fraction(num, den))
        } else {
            let count: usize = text
                .parse()
                .map_err(|_| Error::config(format!("bad budget `{text}`")))?;
            if count == 0 {
                return Err(Error::config("budget must be at least 1".to_string()));
            }
            Ok(Budget::Count(count))
        }
    }

    /// Resolve against the number of available tests; fractional
    /// budgets floor but never drop below one test.
    pub fn resolve(&self, num_tests: usize) -> usize {
        match *self {
            Budget::Count(count) => count,
            Budget::Fraction(num, den) => {
                let scaled = (num_tests as u64 * num) / den;
                (scaled as usize).max(1)
            }
        }
    }

    pub fn render(&self) -> String {
        match *self {
            Budget::Count(count) => count.to_string(),
            Budget::Fraction(num, den) => format!("{num}/{den}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub n: usize,
    pub aggregator: Aggregator,
    pub maturity: MaturityLevel,
    pub selection_mode: SelectionMode,
    pub budget: Budget,
    pub k_links: usize,
    pub filter_scope: FilterScope,
    pub confident_mean: ConfidentMean,
    pub excluded_as_misses: bool,
    pub classifier: ClassifierConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 100,
            aggregator: Aggregator::Mean,
            maturity: MaturityLevel::All,
            selection_mode: SelectionMode::Best,
            budget: Budget::Fraction(1, 10),
            k_links: 5,
            filter_scope: FilterScope::All,
            confident_mean: ConfidentMean::PerKind,
            excluded_as_misses: false,
            classifier: ClassifierConfig::conventional(),
        }
    }
}

fn parse_maturity(value: &str) -> Result<MaturityLevel> {
    match value {
        "all" => Ok(MaturityLevel::All),
        "applicable" => Ok(MaturityLevel::Applicable),
        "confident" => Ok(MaturityLevel::Confident),
        other => Err(Error::config(format!("unknown maturity level `{other}`"))),
    }
}

fn parse_mode(value: &str) -> Result<SelectionMode> {
    match value {
        "best" => Ok(SelectionMode::Best),
        "avg" => Ok(SelectionMode::Avg),
        other => Err(Error::config(format!("unknown selection mode `{other}`"))),
    }
}

fn parse_filter_scope(value: &str) -> Result<FilterScope> {
    match value {
        "all" => Ok(FilterScope::All),
        "fault-only" => Ok(FilterScope::FaultOnly),
        other => Err(Error::config(format!("unknown filter scope `{other}`"))),
    }
}

fn parse_bool(value: &str) -> Result<bool> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(Error::config(format!("expected true/false, got `{other}`"))),
    }
}

impl RunConfig {
    /// Load a flat `key = value` config file over the defaults.
    /// Classifier list keys replace the default list on first use; an
    /// empty value clears the list.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read config `{}`: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut config = RunConfig::default();
        let mut touched_test_paths = false;
        let mut touched_test_names = false;
        let mut touched_ignores = false;
        for (line_no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::config(format!("line {}: expected `key = value`", line_no + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "n" => {
                    config.n = value
                        .parse()
                        .map_err(|_| Error::config(format!("bad n `{value}`")))?;
                }
                "aggregator" => match value {
                    "mean" => config.aggregator = Aggregator::Mean,
                    other => {
                        return Err(Error::config(format!("unknown aggregator `{other}`")))
                    }
                },
                "maturity" => config.maturity = parse_maturity(value)?,
                "mode" => config.selection_mode = parse_mode(value)?,
                "budget" => config.budget = Budget::parse(value)?,
                "k" => {
                    config.k_links = value
                        .parse()
                        .map_err(|_| Error::config(format!("bad k `{value}`")))?;
                }
                "filter_scope" => config.filter_scope = parse_filter_scope(value)?,
                "confident_mean" => match value {
                    "per-kind" => config.confident_mean = ConfidentMean::PerKind,
                    "pooled" => config.confident_mean = ConfidentMean::Pooled,
                    other => {
                        return Err(Error::config(format!("unknown confident_mean `{other}`")))
                    }
                },
                "excluded_as_misses" => config.excluded_as_misses = parse_bool(value)?,
                "test_path_glob" => {
                    if !touched_test_paths {
                        config.classifier.test_path_globs.clear();
                        touched_test_paths = true;
                    }
                    if !value.is_empty() {
                        config.classifier.test_path_globs.push(value.to_string());
                    }
                }
                "test_name_pattern" => {
                    if !touched_test_names {
                        config.classifier.test_name_patterns.clear();
                        touched_test_names = true;
                    }
                    if !value.is_empty() {
                        config
                            .classifier
                            .test_name_patterns
                            .push(value.to_string());
                    }
                }
                "ignore_glob" => {
                    if !touched_ignores {
                        config.classifier.ignore_globs.clear();
                        touched_ignores = true;
                    }
                    if !value.is_empty() {
                        config.classifier.ignore_globs.push(value.to_string());
                    }
                }
                other => {
                    return Err(Error::config(format!(
                        "line {}: unknown config key `{other}`",
                        line_no + 1
                    )))
                }
            }
        }
        Ok(config)
    }

    pub fn budget_rational(&self) -> Rational {
        match self.budget {
            Budget::Count(count) => rational::from_int(count as u64),
            Budget::Fraction(num, den) => rational::ratio(num, den),
        }
    }
}
