//! Metrics harness: acc@n, wasted-effort summaries, mutation score
//! against an externally supplied kill matrix, and precision/recall/F1
//! for link prediction. All fractions are exact rationals.

use std::collections::BTreeSet;
use std::io::{BufRead, BufReader, Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::history::EntityId;
use crate::rational::{self, Rational};

/// Number of fault ranks within the top `n`.
pub fn acc_at_n(fault_ranks: &[usize], n: usize) -> usize {
    fault_ranks.iter().filter(|&&rank| rank <= n).count()
}

/// Mean and median wasted effort (`rank - 1`); `None` on empty input.
pub fn wef_summary(fault_ranks: &[usize]) -> Option<(Rational, Rational)> {
    if fault_ranks.is_empty() {
        return None;
    }
    let wefs: Vec<u64> = fault_ranks.iter().map(|&rank| (rank - 1) as u64).collect();
    let mean = rational::mean(&wefs)?;
    let median = rational::median(&wefs)?;
    Some((mean, median))
}

/// A mutant id, optionally tagged with the method hosting the mutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutantId {
    pub id: String,
    pub host_method: Option<String>,
}

/// Test × mutant boolean outcomes produced by an external mutation
/// tool.
#[derive(Clone, Debug)]
pub struct KillMatrix {
    tests: Vec<EntityId>,
    mutants: Vec<MutantId>,
    /// `kills[t][m]` = test `t` kills mutant `m`.
    kills: Vec<Vec<bool>>,
}

impl KillMatrix {
    pub fn new(tests: Vec<EntityId>, mutants: Vec<MutantId>, kills: Vec<Vec<bool>>) -> Result<Self> {
        if kills.len() != tests.len() {
            return Err(Error::input(format!(
                "kill matrix has {} rows for {} tests",
                kills.len(),
                tests.len()
            )));
        }
        for row in &kills {
            if row.len() != mutants.len() {
                return Err(Error::input(format!(
                    "kill matrix row has {} cells for {} mutants",
                    row.len(),
                    mutants.len()
                )));
            }
        }
        Ok(KillMatrix {
            tests,
            mutants,
            kills,
        })
    }

    pub fn tests(&self) -> &[EntityId] {
        &self.tests
    }

    pub fn num_mutants(&self) -> usize {
        self.mutants.len()
    }

    fn killed_by(&self, selected: &BTreeSet<EntityId>) -> usize {
        let rows: Vec<usize> = self
            .tests
            .iter()
            .enumerate()
            .filter(|(_, test)| selected.contains(test))
            .map(|(row, _)| row)
            .collect();
        (0..self.mutants.len())
            .filter(|&m| rows.iter().any(|&t| self.kills[t][m]))
            .count()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MutationScores {
    /// Mutants killed by the selection over all mutants; `None` only
    /// for a matrix without mutants.
    pub ms: Option<Rational>,
    /// `ms / ms(all tests)`; `None` when the full suite kills nothing.
    pub r_ms: Option<Rational>,
    pub killed: usize,
    pub killed_by_all: usize,
    pub total_mutants: usize,
}

/// Mutation score of a selection and its ratio to the full suite's
/// score. Unknown test ids in the selection are an input error.
pub fn mutation_scores(km: &KillMatrix, selected: &BTreeSet<EntityId>) -> Result<MutationScores> {
    let known: BTreeSet<&EntityId> = km.tests.iter().collect();
    for test in selected {
        if !known.contains(test) {
            return Err(Error::unknown(format!(
                "selected test `{test}` is not in the kill matrix"
            )));
        }
    }
    let total = km.num_mutants();
    let killed = km.killed_by(selected);
    let all: BTreeSet<EntityId> = km.tests.iter().cloned().collect();
    let killed_by_all = km.killed_by(&all);
    let ms = (total > 0).then(|| rational::ratio(killed as u64, total as u64));
    let r_ms = if killed_by_all == 0 {
        None
    } else {
        Some(rational::ratio(killed as u64, killed_by_all as u64))
    };
    Ok(MutationScores {
        ms,
        r_ms,
        killed,
        killed_by_all,
        total_mutants: total,
    })
}

/// Externally supplied traceability ground truth.
#[derive(Clone, Debug, Default)]
pub struct LinkOracle {
    pub pairs: BTreeSet<(EntityId, EntityId)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Prf {
    /// `None` when nothing was predicted.
    pub precision: Option<Rational>,
    /// `None` when the oracle is empty.
    pub recall: Option<Rational>,
    /// `None` when either component is undefined or both are zero.
    pub f1: Option<Rational>,
    pub predicted: usize,
    pub oracle: usize,
    pub hits: usize,
}

/// Precision, recall and F1 of predicted (test, method) pairs against
/// the oracle.
pub fn link_prf(predicted: &BTreeSet<(EntityId, EntityId)>, oracle: &LinkOracle) -> Prf {
    let hits = predicted.intersection(&oracle.pairs).count();
    let precision = (!predicted.is_empty())
        .then(|| rational::ratio(hits as u64, predicted.len() as u64));
    let recall = (!oracle.pairs.is_empty())
        .then(|| rational::ratio(hits as u64, oracle.pairs.len() as u64));
    let f1 = match (&precision, &recall) {
        (Some(p), Some(r)) => {
            let sum = p + r;
            if sum == rational::from_int(0) {
                None
            } else {
                Some((p * r * rational::from_int(2)) / sum)
            }
        }
        _ => None,
    };
    Prf {
        precision,
        recall,
        f1,
        predicted: predicted.len(),
        oracle: oracle.pairs.len(),
        hits,
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KillMatrixHeader {
    tests: Vec<EntityRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntityRecord {
    kind: crate::history::EntityKind,
    file_path: String,
    qualified_name: String,
}

impl From<&EntityId> for EntityRecord {
    fn from(id: &EntityId) -> Self {
        EntityRecord {
            kind: id.kind,
            file_path: id.file_path.clone(),
            qualified_name: id.qualified_name.clone(),
        }
    }
}

impl From<EntityRecord> for EntityId {
    fn from(record: EntityRecord) -> Self {
        EntityId::new(record.kind, record.file_path, record.qualified_name)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MutantRecord {
    mutant: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    host: Option<String>,
    kills: String,
}

/// Read the kill-matrix file format: line 1 is a header naming the
/// tests, every following line is one mutant with a `0`/`1` kill
/// string, one character per test.
pub fn read_kill_matrix<R: Read>(input: R) -> Result<KillMatrix> {
    let mut lines = BufReader::new(input).lines();
    let header_line = lines
        .next()
        .ok_or_else(|| Error::input("empty kill matrix: missing header"))??;
    let header: KillMatrixHeader = serde_json::from_str(&header_line)
        .map_err(|e| Error::input(format!("malformed kill-matrix header: {e}")))?;
    let tests: Vec<EntityId> = header.tests.into_iter().map(EntityId::from).collect();

    let mut mutants = Vec::new();
    let mut columns: Vec<Vec<bool>> = Vec::new();
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: MutantRecord = serde_json::from_str(&line)
            .map_err(|e| Error::input(format!("malformed mutant record: {e}")))?;
        if record.kills.len() != tests.len() {
            return Err(Error::input(format!(
                "mutant `{}` has {} kill bits for {} tests",
                record.mutant,
                record.kills.len(),
                tests.len()
            )));
        }
        let mut column = Vec::with_capacity(tests.len());
        for bit in record.kills.chars() {
            match bit {
                '0' => column.push(false),
                '1' => column.push(true),
                other => {
                    return Err(Error::input(format!(
                        "mutant `{}` has invalid kill bit `{other}`",
                        record.mutant
                    )))
                }
            }
        }
        mutants.push(MutantId {
            id: record.mutant,
            host_method: record.host,
        });
        columns.push(column);
    }

    let kills: Vec<Vec<bool>> = (0..tests.len())
        .map(|t| columns.iter().map(|column| column[t]).collect())
        .collect();
    KillMatrix::new(tests, mutants, kills)
}

/// Write the kill-matrix file format (inverse of [`read_kill_matrix`]).
pub fn write_kill_matrix<W: Write>(km: &KillMatrix, mut out: W) -> Result<()> {
    let header = KillMatrixHeader {
        tests: km.tests.iter().map(EntityRecord::from).collect(),
    };
    writeln!(out, "{}", serde_json::to_string(&header).expect("header"))?;
    for (m, mutant) in km.mutants.iter().enumerate() {
        let kills: String = km
            .kills
            .iter()
            .map(|row| if row[m] { '1' } else { '0' })
            .collect();
        let record = MutantRecord {
            mutant: mutant.id.clone(),
            host: mutant.host_method.clone(),
            kills,
        };
        writeln!(out, "{}", serde_json::to_string(&record).expect("mutant"))?;
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkRecord {
    test: EntityRecord,
    method: EntityRecord,
}

/// Read a link oracle (or predicted-link file): one (test, method)
/// pair per line.
pub fn read_links<R: Read>(input: R) -> Result<BTreeSet<(EntityId, EntityId)>> {
    let reader = BufReader::new(input);
    let mut pairs = BTreeSet::new();
    for (line_no, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: LinkRecord = serde_json::from_str(&line).map_err(|e| {
            Error::input(format!("malformed link record on line {}: {e}", line_no + 1))
        })?;
        pairs.insert((record.test.into(), record.method.into()));
    }
    Ok(pairs)
}
