//! The three uses of the coupling engine: fault localization, test
//! selection for a method set, and top-k link prediction, plus the
//! maturity filters that gate them.

use std::collections::{BTreeMap, BTreeSet};

use crate::coupling::{rank_candidates, worst_ranks, Aggregator};
use crate::error::{Error, Result};
use crate::history::{ChangeHistory, CommitRef, EntityId, EntityKind};
use crate::rational::{self, Rational};

/// Maturity gates: everything, entities changed at least once, or
/// entities changed at least the mean number of times.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub enum MaturityLevel {
    #[default]
    All,
    Applicable,
    Confident,
}

impl MaturityLevel {
    pub fn as_str(self) -> &'static str {
        match self {
            MaturityLevel::All => "all",
            MaturityLevel::Applicable => "applicable",
            MaturityLevel::Confident => "confident",
        }
    }
}

/// Whether the Confident mean is computed per kind (methods and tests
/// separately) or pooled over all entities.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ConfidentMean {
    #[default]
    PerKind,
    Pooled,
}

/// Whether maturity filtering applies to every entity or only gates
/// which faults are evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FilterScope {
    #[default]
    All,
    FaultOnly,
}

impl FilterScope {
    pub fn as_str(self) -> &'static str {
        match self {
            FilterScope::All => "all",
            FilterScope::FaultOnly => "fault-only",
        }
    }
}

/// Aggregation of per-method rankings into one score per test.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SelectionMode {
    #[default]
    Best,
    Avg,
}

impl SelectionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SelectionMode::Best => "best",
            SelectionMode::Avg => "avg",
        }
    }
}

/// Entities passing a maturity level. `All` admits every stored
/// entity; `Applicable` admits entities with at least one revision
/// (identical to the stored set, but the set also validates externally
/// supplied ids); `Confident` admits entities whose revision count is
/// at least the mean count, computed per kind by default.
pub fn maturity_filter(
    history: &ChangeHistory,
    level: MaturityLevel,
    mean_mode: ConfidentMean,
) -> BTreeSet<EntityId> {
    match level {
        MaturityLevel::All | MaturityLevel::Applicable => {
            history.entity_ids().cloned().collect()
        }
        MaturityLevel::Confident => {
            // count >= total/n compared exactly as count * n >= total.
            let mut totals: BTreeMap<Option<EntityKind>, (u64, u64)> = BTreeMap::new();
            for (id, revs) in history.entities() {
                let key = match mean_mode {
                    ConfidentMean::PerKind => Some(id.kind),
                    ConfidentMean::Pooled => None,
                };
                let entry = totals.entry(key).or_insert((0, 0));
                entry.0 += revs.len() as u64;
                entry.1 += 1;
            }
            history
                .entities()
                .filter(|(id, revs)| {
                    let key = match mean_mode {
                        ConfidentMean::PerKind => Some(id.kind),
                        ConfidentMean::Pooled => None,
                    };
                    let (total, count) = totals[&key];
                    (revs.len() as u64) * count >= total
                })
                .map(|(id, _)| id.clone())
                .collect()
        }
    }
}

/// A fault to localize: its failing tests, its faulty methods when
/// known (empty for prediction-only use), and the commit at which
/// history knowledge stops.
#[derive(Clone, Debug)]
pub struct FaultCase {
    pub fault_id: String,
    pub failing_tests: BTreeSet<EntityId>,
    pub faulty_methods: BTreeSet<EntityId>,
    pub cutoff: CommitRef,
}

impl FaultCase {
    pub fn new(
        fault_id: impl Into<String>,
        failing_tests: BTreeSet<EntityId>,
        faulty_methods: BTreeSet<EntityId>,
        cutoff: CommitRef,
    ) -> Result<Self> {
        let fault_id = fault_id.into();
        if failing_tests.is_empty() {
            return Err(Error::input(format!(
                "fault `{fault_id}` has no failing tests"
            )));
        }
        if let Some(bad) = failing_tests.iter().find(|t| t.kind != EntityKind::Test) {
            return Err(Error::input(format!(
                "fault `{fault_id}`: failing test `{bad}` is not a test entity"
            )));
        }
        if let Some(bad) = faulty_methods.iter().find(|m| m.kind != EntityKind::Method) {
            return Err(Error::input(format!(
                "fault `{fault_id}`: faulty method `{bad}` is not a method entity"
            )));
        }
        Ok(FaultCase {
            fault_id,
            failing_tests,
            faulty_methods,
            cutoff,
        })
    }
}

/// Why a fault could not be localized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NotApplicableReason {
    /// Every failing test has no change history at the cutoff.
    NoFailingTestHistory,
    /// The maturity criteria excluded the fault's own tests/methods.
    MaturityExcluded,
}

impl NotApplicableReason {
    pub fn as_str(self) -> &'static str {
        match self {
            NotApplicableReason::NoFailingTestHistory => "no-failing-test-history",
            NotApplicableReason::MaturityExcluded => "maturity-excluded",
        }
    }
}

/// One candidate method in the final localization ranking.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MethodRank {
    pub method: EntityId,
    /// Best (smallest) rank across the failing tests.
    pub best_across_tests: usize,
    /// Final worst-case tie rank after re-ranking.
    pub rank: usize,
}

/// Localization output for one fault.
#[derive(Clone, Debug)]
pub struct Localization {
    pub fault_id: String,
    /// All candidate methods, strongest coupling first.
    pub ranking: Vec<MethodRank>,
    /// Best final rank among the fault's methods; `None` when the
    /// fault has no faulty methods among the candidates.
    pub fault_rank: Option<usize>,
    /// Wasted effort: `fault_rank - 1` under worst-case ties.
    pub wef: Option<usize>,
    /// Failing tests that contributed rankings.
    pub used_tests: Vec<EntityId>,
    /// Failing tests dropped for missing history or maturity.
    pub skipped_tests: Vec<EntityId>,
    /// Faulty methods that are not among the candidates.
    pub unresolved_methods: Vec<EntityId>,
    /// Number of candidate methods ranked.
    pub candidate_count: usize,
    /// Methods in the truncated history before maturity filtering.
    pub method_universe: usize,
}

#[derive(Clone, Debug)]
pub enum LocalizeOutcome {
    Localized(Localization),
    NotApplicable {
        fault_id: String,
        reason: NotApplicableReason,
        /// Methods in the truncated history before maturity filtering.
        method_universe: usize,
        /// Candidate methods the ranking would have used.
        candidate_count: usize,
    },
}

/// Localize one fault.
///
/// History is truncated to the fault's cutoff commit (inclusive); for
/// each failing test the candidate methods are ranked by coupling; the
/// per-method best rank across failing tests is re-ranked with
/// worst-case ties; the fault's rank is the best final rank among its
/// faulty methods.
pub fn localize(
    fault: &FaultCase,
    history: &ChangeHistory,
    level: MaturityLevel,
    scope: FilterScope,
    mean_mode: ConfidentMean,
    top_n: usize,
    aggregator: Aggregator,
) -> Result<LocalizeOutcome> {
    let at_cutoff = match history.commit_by_hash(&fault.cutoff.hash) {
        Some(commit) if commit.index == fault.cutoff.index => {
            history.truncate_at(commit.index)?
        }
        _ => {
            return Err(Error::unknown(format!(
                "cutoff commit `{}` (index {}) not found in history",
                fault.cutoff.hash, fault.cutoff.index
            )))
        }
    };

    let qualified = maturity_filter(&at_cutoff, level, mean_mode);

    let method_universe = at_cutoff
        .entity_ids()
        .filter(|id| id.kind == EntityKind::Method)
        .count();

    let candidates: Vec<EntityId> = match scope {
        FilterScope::All => qualified
            .iter()
            .filter(|id| id.kind == EntityKind::Method)
            .cloned()
            .collect(),
        FilterScope::FaultOnly => at_cutoff
            .entity_ids()
            .filter(|id| id.kind == EntityKind::Method)
            .cloned()
            .collect(),
    };

    // Fault-only scope gates the fault on its own entities' maturity,
    // then ranks without any filtering.
    if scope == FilterScope::FaultOnly {
        let any_test_qualifies = fault.failing_tests.iter().any(|t| qualified.contains(t));
        let any_method_qualifies = fault.faulty_methods.is_empty()
            || fault.faulty_methods.iter().any(|m| qualified.contains(m));
        if !any_test_qualifies || !any_method_qualifies {
            let all_tests_lack_history = fault
                .failing_tests
                .iter()
                .all(|t| at_cutoff.revisions_of(t).is_none());
            let reason = if all_tests_lack_history {
                NotApplicableReason::NoFailingTestHistory
            } else {
                NotApplicableReason::MaturityExcluded
            };
            return Ok(LocalizeOutcome::NotApplicable {
                fault_id: fault.fault_id.clone(),
                reason,
                method_universe,
                candidate_count: candidates.len(),
            });
        }
    }

    let mut used_tests = Vec::new();
    let mut skipped_tests = Vec::new();
    for test in &fault.failing_tests {
        let has_history = at_cutoff.revisions_of(test).is_some();
        let usable = match scope {
            FilterScope::All => has_history && qualified.contains(test),
            FilterScope::FaultOnly => has_history,
        };
        if usable {
            used_tests.push(test.clone());
        } else {
            skipped_tests.push(test.clone());
        }
    }

    if used_tests.is_empty() {
        let all_tests_lack_history = fault
            .failing_tests
            .iter()
            .all(|t| at_cutoff.revisions_of(t).is_none());
        let reason = if all_tests_lack_history {
            NotApplicableReason::NoFailingTestHistory
        } else {
            NotApplicableReason::MaturityExcluded
        };
        return Ok(LocalizeOutcome::NotApplicable {
            fault_id: fault.fault_id.clone(),
            reason,
            method_universe,
            candidate_count: candidates.len(),
        });
    }

    // Best rank per method across the failing tests, then a final
    // worst-case re-ranking.
    let mut best: Vec<usize> = vec![usize::MAX; candidates.len()];
    for test in &used_tests {
        let ranked = rank_candidates(test, &candidates, &at_cutoff, top_n, aggregator);
        let mut rank_by_id: BTreeMap<&EntityId, usize> = BTreeMap::new();
        for entry in &ranked.entries {
            rank_by_id.insert(&entry.candidate, entry.rank);
        }
        for (i, candidate) in candidates.iter().enumerate() {
            let rank = rank_by_id[candidate];
            if rank < best[i] {
                best[i] = rank;
            }
        }
    }
    let final_ranks = worst_ranks(&best);

    let mut ranking: Vec<MethodRank> = candidates
        .iter()
        .cloned()
        .zip(best.iter().copied())
        .zip(final_ranks.iter().copied())
        .map(|((method, best_across_tests), rank)| MethodRank {
            method,
            best_across_tests,
            rank,
        })
        .collect();
    ranking.sort_by(|a, b| a.rank.cmp(&b.rank).then_with(|| a.method.cmp(&b.method)));

    let candidate_set: BTreeSet<&EntityId> = candidates.iter().collect();
    let unresolved_methods: Vec<EntityId> = fault
        .faulty_methods
        .iter()
        .filter(|m| !candidate_set.contains(m))
        .cloned()
        .collect();
    let fault_rank = ranking
        .iter()
        .filter(|entry| fault.faulty_methods.contains(&entry.method))
        .map(|entry| entry.rank)
        .min();
    let wef = fault_rank.map(|rank| rank - 1);

    Ok(LocalizeOutcome::Localized(Localization {
        fault_id: fault.fault_id.clone(),
        ranking,
        fault_rank,
        wef,
        used_tests,
        skipped_tests,
        unresolved_methods,
        candidate_count: candidates.len(),
        method_universe,
    }))
}

/// A selected test and the score that earned its spot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectedTest {
    pub test: EntityId,
    pub score: Rational,
}

/// Select up to `budget` tests for a method set.
///
/// Every method ranks all tests; a test's score is its best (smallest)
/// or mean rank across the methods. Boundary ties are resolved by
/// (score, qualified name) order, so the selection is deterministic.
pub fn select_tests(
    methods: &BTreeSet<EntityId>,
    tests: &BTreeSet<EntityId>,
    history: &ChangeHistory,
    mode: SelectionMode,
    budget: usize,
    top_n: usize,
    aggregator: Aggregator,
) -> Result<Vec<SelectedTest>> {
    if methods.is_empty() {
        return Err(Error::input("empty method set".to_string()));
    }
    if budget == 0 {
        return Err(Error::input("budget must be at least 1".to_string()));
    }
    let test_list: Vec<EntityId> = tests.iter().cloned().collect();
    if test_list.is_empty() {
        return Ok(Vec::new());
    }

    let mut rank_sums: Vec<u64> = vec![0; test_list.len()];
    let mut rank_mins: Vec<usize> = vec![usize::MAX; test_list.len()];
    for method in methods {
        let ranked = rank_candidates(method, &test_list, history, top_n, aggregator);
        let mut rank_by_id: BTreeMap<&EntityId, usize> = BTreeMap::new();
        for entry in &ranked.entries {
            rank_by_id.insert(&entry.candidate, entry.rank);
        }
        for (i, test) in test_list.iter().enumerate() {
            let rank = rank_by_id[test];
            rank_sums[i] += rank as u64;
            rank_mins[i] = rank_mins[i].min(rank);
        }
    }

    let mut scored: Vec<SelectedTest> = test_list
        .into_iter()
        .enumerate()
        .map(|(i, test)| {
            let score = match mode {
                SelectionMode::Best => rational::from_int(rank_mins[i] as u64),
                SelectionMode::Avg => {
                    rational::ratio(rank_sums[i], methods.len() as u64)
                }
            };
            SelectedTest { test, score }
        })
        .collect();
    scored.sort_by(|a, b| {
        a.score
            .cmp(&b.score)
            .then_with(|| a.test.qualified_name.cmp(&b.test.qualified_name))
            .then_with(|| a.test.cmp(&b.test))
    });
    scored.truncate(budget);
    Ok(scored)
}

/// Top-k methods for a test, as traceability-link predictions.
/// Boundary ties are included then truncated by (rank, qualified name)
/// order, as in test selection.
pub fn predict_links(
    test: &EntityId,
    methods: &BTreeSet<EntityId>,
    history: &ChangeHistory,
    k: usize,
    top_n: usize,
    aggregator: Aggregator,
) -> Vec<EntityId> {
    let method_list: Vec<EntityId> = methods.iter().cloned().collect();
    let ranked = rank_candidates(test, &method_list, history, top_n, aggregator);
    let mut entries: Vec<(usize, EntityId)> = ranked
        .entries
        .into_iter()
        .map(|entry| (entry.rank, entry.candidate))
        .collect();
    entries.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then_with(|| a.1.qualified_name.cmp(&b.1.qualified_name))
            .then_with(|| a.1.cmp(&b.1))
    });
    entries.truncate(k);
    entries.into_iter().map(|(_, id)| id).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::history::{CommitRef, HistoryMeta};
    use crate::rational::ratio;

    fn fixture(entities: &[(EntityId, Vec<usize>)], num_commits: usize) -> ChangeHistory {
        let commits = (0..num_commits)
            .map(|index| CommitRef {
                hash: format!("c{index}"),
                index,
            })
            .collect();
        ChangeHistory::new(
            commits,
            entities.iter().cloned().collect(),
            HistoryMeta::new("fixture", "digest"),
        )
        .unwrap()
    }

    fn method(name: &str) -> EntityId {
        EntityId::method("M.java", format!("M.{name}/0"))
    }

    fn test_entity(name: &str) -> EntityId {
        EntityId::test("T.java", format!("T.{name}/0"))
    }

    fn cutoff(history: &ChangeHistory) -> CommitRef {
        history.commits().last().unwrap().clone()
    }

    #[test]
    fn maturity_all_once_makes_applicable_equal_confident() {
        let history = fixture(
            &[
                (method("a"), vec![0]),
                (method("b"), vec![1]),
                (test_entity("t"), vec![2]),
            ],
            3,
        );
        let all = maturity_filter(&history, MaturityLevel::All, ConfidentMean::PerKind);
        let applicable =
            maturity_filter(&history, MaturityLevel::Applicable, ConfidentMean::PerKind);
        let confident =
            maturity_filter(&history, MaturityLevel::Confident, ConfidentMean::PerKind);
        assert_eq!(all.len(), 3);
        assert_eq!(applicable, all);
        assert_eq!(confident, all);
    }

    #[test]
    fn confident_uses_per_kind_mean() {
        // Method counts {1, 3}: mean 2, only the count-3 method stays.
        let history = fixture(
            &[
                (method("rare"), vec![0]),
                (method("busy"), vec![1, 2, 3]),
                (test_entity("t"), vec![0]),
            ],
            4,
        );
        let confident =
            maturity_filter(&history, MaturityLevel::Confident, ConfidentMean::PerKind);
        assert!(confident.contains(&method("busy")));
        assert!(!confident.contains(&method("rare")));
        // The lone test sits exactly at its kind's mean.
        assert!(confident.contains(&test_entity("t")));
    }

    #[test]
    fn confident_pooled_mean_differs_from_per_kind() {
        // Pooled mean = (1 + 3 + 1 + 3) / 4 = 2; per-kind method mean =
        // 2, test mean = 2. Here counts {1,3} per kind and pooled agree;
        // shift the test counts to {2,2} to separate them.
        let history = fixture(
            &[
                (method("rare"), vec![0]),
                (method("busy"), vec![1, 2, 3]),
                (test_entity("t1"), vec![0, 1]),
                (test_entity("t2"), vec![2, 3]),
            ],
            4,
        );
        // Pooled mean = (1+3+2+2)/4 = 2: both tests qualify, rare does
        // not. Per-kind test mean = 2 as well, but method mean = 2 so
        // the outcome for `rare` matches; verify the sets directly.
        let per_kind =
            maturity_filter(&history, MaturityLevel::Confident, ConfidentMean::PerKind);
        let pooled =
            maturity_filter(&history, MaturityLevel::Confident, ConfidentMean::Pooled);
        assert!(per_kind.contains(&test_entity("t1")));
        assert!(pooled.contains(&test_entity("t1")));
        assert!(!per_kind.contains(&method("rare")));
        assert!(!pooled.contains(&method("rare")));
    }

    #[test]
    fn scripted_counts_match_hand_recount() {
        // 10 methods with counts 1..=10 and 10 tests with counts
        // 1..=10. Mean = 5.5, so entities with count >= 6 qualify.
        let mut entities = Vec::new();
        for i in 1..=10usize {
            entities.push((method(&format!("m{i}")), (0..i).collect::<Vec<_>>()));
            entities.push((test_entity(&format!("t{i}")), (10..10 + i).collect()));
        }
        let history = fixture(&entities, 30);
        let confident =
            maturity_filter(&history, MaturityLevel::Confident, ConfidentMean::PerKind);
        for i in 1..=10usize {
            assert_eq!(confident.contains(&method(&format!("m{i}"))), i >= 6);
            assert_eq!(confident.contains(&test_entity(&format!("t{i}"))), i >= 6);
        }
    }

    #[test]
    fn perfect_co_change_localizes_at_rank_one() {
        let partner = method("partner");
        let noise = method("noise");
        let failing = test_entity("fails");
        let history = fixture(
            &[
                (partner.clone(), vec![1, 4, 7]),
                (noise.clone(), vec![2, 5]),
                (failing.clone(), vec![1, 4, 7]),
            ],
            8,
        );
        let fault = FaultCase::new(
            "f1",
            [failing].into(),
            [partner].into(),
            cutoff(&history),
        )
        .unwrap();
        let outcome = localize(
            &fault,
            &history,
            MaturityLevel::All,
            FilterScope::All,
            ConfidentMean::PerKind,
            100,
            Aggregator::Mean,
        )
        .unwrap();
        let LocalizeOutcome::Localized(result) = outcome else {
            panic!("expected localization");
        };
        assert_eq!(result.fault_rank, Some(1));
        assert_eq!(result.wef, Some(0));
    }

    #[test]
    fn historyless_failing_test_is_not_applicable() {
        let history = fixture(&[(method("m"), vec![0])], 2);
        let fault = FaultCase::new(
            "f1",
            [test_entity("ghost")].into(),
            [method("m")].into(),
            cutoff(&history),
        )
        .unwrap();
        let outcome = localize(
            &fault,
            &history,
            MaturityLevel::All,
            FilterScope::All,
            ConfidentMean::PerKind,
            100,
            Aggregator::Mean,
        )
        .unwrap();
        assert!(matches!(
            outcome,
            LocalizeOutcome::NotApplicable {
                reason: NotApplicableReason::NoFailingTestHistory,
                ..
            }
        ));
    }

    #[test]
    fn cutoff_hides_later_revisions() {
        // The failing test only has history after the cutoff.
        let failing = test_entity("late");
        let history = fixture(
            &[
                (method("m"), vec![0]),
                (failing.clone(), vec![3]),
            ],
            4,
        );
        let fault = FaultCase::new(
            "f1",
            [failing].into(),
            [method("m")].into(),
            CommitRef {
                hash: "c1".into(),
                index: 1,
            },
        )
        .unwrap();
        let outcome = localize(
            &fault,
            &history,
            MaturityLevel::All,
            FilterScope::All,
            ConfidentMean::PerKind,
            100,
            Aggregator::Mean,
        )
        .unwrap();
        assert!(matches!(
            outcome,
            LocalizeOutcome::NotApplicable {
                reason: NotApplicableReason::NoFailingTestHistory,
                ..
            }
        ));
    }

    #[test]
    fn unknown_cutoff_is_unresolvable() {
        let history = fixture(&[(method("m"), vec![0])], 2);
        let fault = FaultCase::new(
            "f1",
            [test_entity("t")].into(),
            BTreeSet::new(),
            CommitRef {
                hash: "nope".into(),
                index: 0,
            },
        )
        .unwrap();
        let err = localize(
            &fault,
            &history,
            MaturityLevel::All,
            FilterScope::All,
            ConfidentMean::PerKind,
            100,
            Aggregator::Mean,
        );
        assert!(matches!(err, Err(Error::UnknownEntity(_))));
    }

    #[test]
    fn single_method_selection_follows_rank_order() {
        let m = method("m");
        let t1 = test_entity("near");
        let t2 = test_entity("far");
        let history = fixture(
            &[
                (m.clone(), vec![5]),
                (t1.clone(), vec![5]),
                (t2.clone(), vec![0]),
            ],
            6,
        );
        let selected = select_tests(
            &[m].into(),
            &[t1.clone(), t2.clone()].into(),
            &history,
            SelectionMode::Best,
            2,
            100,
            Aggregator::Mean,
        )
        .unwrap();
        assert_eq!(selected[0].test, t1);
        assert_eq!(selected[0].score, ratio(1, 1));
        assert_eq!(selected[1].test, t2);
        assert_eq!(selected[1].score, ratio(2, 1));
    }

    #[test]
    fn best_and_avg_scores_aggregate_ranks() {
        // Manufacture a history where test `mixed` ranks 1 for one
        // method and 2 for the other, while `steady` ranks 2 and 1.
        let m1 = method("m1");
        let m2 = method("m2");
        let mixed = test_entity("mixed");
        let steady = test_entity("steady");
        let history = fixture(
            &[
                (m1.clone(), vec![10]),
                (m2.clone(), vec![20]),
                (mixed.clone(), vec![10, 23]),
                (steady.clone(), vec![13, 20]),
            ],
            30,
        );
        let best = select_tests(
            &[m1.clone(), m2.clone()].into(),
            &[mixed.clone(), steady.clone()].into(),
            &history,
            SelectionMode::Best,
            2,
            100,
            Aggregator::Mean,
        )
        .unwrap();
        // Both tests have best rank 1; tie resolved by name.
        assert_eq!(best[0].score, ratio(1, 1));
        assert_eq!(best[1].score, ratio(1, 1));
        assert_eq!(best[0].test.qualified_name, "T.mixed/0");
        let avg = select_tests(
            &[m1, m2].into(),
            &[mixed, steady].into(),
            &history,
            SelectionMode::Avg,
            2,
            100,
            Aggregator::Mean,
        )
        .unwrap();
        assert_eq!(avg[0].score, ratio(3, 2));
        assert_eq!(avg[1].score, ratio(3, 2));
    }

    #[test]
    fn empty_method_set_is_an_input_error() {
        let history = fixture(&[(test_entity("t"), vec![0])], 1);
        let err = select_tests(
            &BTreeSet::new(),
            &[test_entity("t")].into(),
            &history,
            SelectionMode::Best,
            1,
            100,
            Aggregator::Mean,
        );
        assert!(matches!(err, Err(Error::Input(_))));
    }

    #[test]
    fn predict_links_returns_all_methods_when_k_covers_them() {
        let t = test_entity("t");
        let methods: BTreeSet<EntityId> = [method("a"), method("b")].into();
        let history = fixture(
            &[
                (t.clone(), vec![0]),
                (method("a"), vec![0]),
                (method("b"), vec![1]),
            ],
            2,
        );
        let links = predict_links(&t, &methods, &history, 5, 100, Aggregator::Mean);
        assert_eq!(links.len(), 2);
    }

    #[test]
    fn predict_links_top_one_on_worked_example() {
        // Target test revised at {1,3,4}, partner method at {0,3},
        // unrelated method far away.
        let t = test_entity("t");
        let partner = method("m");
        let unrelated = method("zz");
        let history = fixture(
            &[
                (t.clone(), vec![1, 3, 4]),
                (partner.clone(), vec![0, 3]),
                (unrelated.clone(), vec![20]),
            ],
            25,
        );
        let links = predict_links(
            &t,
            &[partner.clone(), unrelated].into(),
            &history,
            1,
            100,
            Aggregator::Mean,
        );
        assert_eq!(links, vec![partner]);
    }

    #[test]
    fn historyless_test_predicts_deterministic_tie_order() {
        let t = test_entity("ghost");
        let methods: BTreeSet<EntityId> =
            [method("c"), method("a"), method("b")].into();
        let history = fixture(
            &[
                (method("a"), vec![0]),
                (method("b"), vec![1]),
                (method("c"), vec![2]),
            ],
            3,
        );
        let links = predict_links(&t, &methods, &history, 2, 100, Aggregator::Mean);
        // All candidates tie at NotApplicable; name order truncates.
        assert_eq!(
            links,
            vec![method("a"), method("b")]
        );
    }
}
