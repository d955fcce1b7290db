//! Evolutionary-coupling math: asymmetric nearest-change distances and
//! bidirectional top-N ranking.
//!
//! The distance from entity `a` to entity `b` is the mean, over `a`'s
//! revisions, of the absolute commit-index gap to the nearest revision
//! of `b`. It is asymmetric by construction: each side independently
//! picks its nearest counterpart. Ranking computes the one-way distance
//! from the target to every candidate, re-weights the N closest
//! candidates by multiplying in the reverse distance, and sorts
//! ascending (smaller distance = stronger coupling). Ties share the
//! worst position any of them could occupy.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;

use crate::history::{ChangeHistory, EntityId};
use crate::rational::{self, Rational};

/// How per-revision nearest distances are folded into one number.
/// Only the mean ships; the enum keeps the aggregation pluggable.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Aggregator {
    #[default]
    Mean,
}

impl Aggregator {
    pub fn as_str(self) -> &'static str {
        match self {
            Aggregator::Mean => "mean",
        }
    }
}

/// An exact coupling distance, or `NotApplicable` when either side has
/// no change history. `NotApplicable` orders after every numeric value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Distance {
    Value(Rational),
    NotApplicable,
}

impl Distance {
    pub fn is_applicable(&self) -> bool {
        matches!(self, Distance::Value(_))
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            Distance::Value(v) => Some(v),
            Distance::NotApplicable => None,
        }
    }

    /// Product of two distances; `NotApplicable` is absorbing.
    pub fn product(&self, other: &Distance) -> Distance {
        match (self, other) {
            (Distance::Value(a), Distance::Value(b)) => Distance::Value(a * b),
            _ => Distance::NotApplicable,
        }
    }

    pub fn render_exact(&self) -> String {
        match self {
            Distance::Value(v) => rational::render_exact(v),
            Distance::NotApplicable => "n/a".to_string(),
        }
    }

    pub fn render_decimal(&self, places: u32) -> String {
        match self {
            Distance::Value(v) => rational::render_decimal(v, places),
            Distance::NotApplicable => "n/a".to_string(),
        }
    }
}

impl PartialOrd for Distance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Distance {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Distance::Value(a), Distance::Value(b)) => a.cmp(b),
            (Distance::Value(_), Distance::NotApplicable) => Ordering::Less,
            (Distance::NotApplicable, Distance::Value(_)) => Ordering::Greater,
            (Distance::NotApplicable, Distance::NotApplicable) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_exact())
    }
}

/// Mean distance from each revision of `revs_t` to the nearest revision
/// of `revs_tc`. Both lists must be sorted ascending. Returns
/// `NotApplicable` when either list is empty.
pub fn distance_to_nearest(revs_t: &[usize], revs_tc: &[usize], aggregator: Aggregator) -> Distance {
    debug_assert!(revs_t.windows(2).all(|w| w[0] < w[1]));
    debug_assert!(revs_tc.windows(2).all(|w| w[0] < w[1]));
    if revs_t.is_empty() || revs_tc.is_empty() {
        return Distance::NotApplicable;
    }
    let mut sum: u64 = 0;
    for &rev in revs_t {
        // Nearest change searches both back and forth.
        let split = revs_tc.partition_point(|&other| other < rev);
        let mut nearest = usize::MAX;
        if split < revs_tc.len() {
            nearest = revs_tc[split] - rev;
        }
        if split > 0 {
            nearest = nearest.min(rev - revs_tc[split - 1]);
        }
        sum += nearest as u64;
    }
    match aggregator {
        Aggregator::Mean => Distance::Value(Rational::new(
            BigInt::from(sum),
            BigInt::from(revs_t.len() as u64),
        )),
    }
}

/// Worst-case tie ranks: every element receives the largest position
/// its equivalence class occupies, i.e. `rank(v) = #{v' < v} + #{v' = v}`.
/// Depends only on the multiset of values, not on input order.
pub fn worst_ranks<T: Ord>(values: &[T]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].cmp(&values[b]));
    let mut ranks = vec![0usize; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        for &idx in &order[start..end] {
            ranks[idx] = end;
        }
        start = end;
    }
    ranks
}

/// One ranked candidate: its combined distance and worst-case tie rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedEntry {
    pub candidate: EntityId,
    pub combined: Distance,
    pub rank: usize,
}

/// Candidates ordered by coupling strength to a target. Entries are a
/// permutation of the input candidate set, sorted ascending by combined
/// distance with entity order as a deterministic display tiebreak.
#[derive(Clone, Debug)]
pub struct RankedList {
    pub target: EntityId,
    pub entries: Vec<RankedEntry>,
    pub top_n: usize,
    pub aggregator: Aggregator,
}

impl RankedList {
    pub fn rank_of(&self, candidate: &EntityId) -> Option<usize> {
        self.entries
            .iter()
            .find(|entry| &entry.candidate == candidate)
            .map(|entry| entry.rank)
    }
}

/// Rank `candidates` by their evolutionary coupling to `target`.
///
/// The one-way distance from the target is computed for every
/// candidate; the N closest (ties at the boundary included) are
/// re-weighted by multiplying in the distance from the candidate back
/// to the target; the rest keep their one-way distance. Candidates
/// without history rank after every numeric distance, sharing one worst
/// rank.
pub fn rank_candidates(
    target: &EntityId,
    candidates: &[EntityId],
    history: &ChangeHistory,
    top_n: usize,
    aggregator: Aggregator,
) -> RankedList {
    let target_revs = history.revisions_of(target).unwrap_or(&[]);

    let forward: Vec<Distance> = candidates
        .iter()
        .map(|candidate| {
            let revs = history.revisions_of(candidate).unwrap_or(&[]);
            distance_to_nearest(target_revs, revs, aggregator)
        })
        .collect();

    // Top-N selection over numeric distances only; boundary ties are
    // all included so the selection is independent of input order.
    let mut numeric: Vec<usize> = (0..candidates.len())
        .filter(|&i| forward[i].is_applicable())
        .collect();
    numeric.sort_by(|&a, &b| forward[a].cmp(&forward[b]));
    let mut selected = vec![false; candidates.len()];
    if numeric.len() <= top_n {
        for &i in &numeric {
            selected[i] = true;
        }
    } else if top_n > 0 {
        let threshold = &forward[numeric[top_n - 1]];
        for &i in &numeric {
            if forward[i] <= *threshold {
                selected[i] = true;
            }
        }
    }

    let combined: Vec<Distance> = candidates
        .iter()
        .enumerate()
        .map(|(i, candidate)| {
            if selected[i] {
                let revs = history.revisions_of(candidate).unwrap_or(&[]);
                let reverse = distance_to_nearest(revs, target_revs, aggregator);
                reverse.product(&forward[i])
            } else {
                forward[i].clone()
            }
        })
        .collect();

    let ranks = worst_ranks(&combined);
    let mut entries: Vec<RankedEntry> = candidates
        .iter()
        .cloned()
        .zip(combined)
        .zip(ranks)
        .map(|((candidate, combined), rank)| RankedEntry {
            candidate,
            combined,
            rank,
        })
        .collect();
    entries.sort_by(|a, b| {
        a.combined
            .cmp(&b.combined)
            .then_with(|| a.candidate.cmp(&b.candidate))
    });

    RankedList {
        target: target.clone(),
        entries,
        top_n,
        aggregator,
    }
}
