//! Line-delimited record shapes shared by the CLI's inputs and
//! outputs, plus the readers for user-supplied files.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use cement_core::applications::FaultCase;
use cement_core::error::{Error, Result};
use cement_core::history::{ChangeHistory, EntityId, EntityKind};

/// The `{kind, file_path, qualified_name}` triple every entity-bearing
/// record carries.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntityRecord {
    pub kind: EntityKind,
    pub file_path: String,
    pub qualified_name: String,
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

/// One fault per line in the faults file.
#[derive(Debug, Serialize, Deserialize)]
pub struct FaultRecord {
    pub fault_id: String,
    pub failing_tests: Vec<EntityRecord>,
    #[serde(default)]
    pub faulty_methods: Vec<EntityRecord>,
    pub cutoff: String,
}

/// Read a faults file and resolve each cutoff hash against the
/// history. An unknown cutoff is an unresolvable id.
pub fn read_faults(path: &Path, history: &ChangeHistory) -> Result<Vec<FaultCase>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read faults `{}`: {e}", path.display())))?;
    let mut faults = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: FaultRecord = serde_json::from_str(line).map_err(|e| {
            Error::input(format!("malformed fault record on line {}: {e}", line_no + 1))
        })?;
        let cutoff = history
            .commit_by_hash(&record.cutoff)
            .cloned()
            .ok_or_else(|| {
                Error::unknown(format!(
                    "fault `{}`: cutoff commit `{}` not in the store",
                    record.fault_id, record.cutoff
                ))
            })?;
        let failing_tests: BTreeSet<EntityId> = record
            .failing_tests
            .into_iter()
            .map(EntityId::from)
            .collect();
        let faulty_methods: BTreeSet<EntityId> = record
            .faulty_methods
            .into_iter()
            .map(EntityId::from)
            .collect();
        faults.push(FaultCase::new(
            record.fault_id,
            failing_tests,
            faulty_methods,
            cutoff,
        )?);
    }
    Ok(faults)
}

/// Read an entity set from any line-delimited file whose lines carry
/// the entity triple. Lines without the triple but with some other
/// `record` tag (such as `meta` or `metrics` from a previous command's
/// output) are skipped, so command outputs pipe straight back in.
pub fn read_entity_set(path: &Path) -> Result<BTreeSet<EntityId>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read `{}`: {e}", path.display())))?;
    let mut entities = BTreeSet::new();
    for (line_no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value = serde_json::from_str(line).map_err(|e| {
            Error::input(format!("malformed record on line {}: {e}", line_no + 1))
        })?;
        match serde_json::from_value::<EntityRecord>(value.clone()) {
            Ok(record) => {
                entities.insert(record.into());
            }
            Err(_) if value.get("record").is_some() => continue,
            Err(e) => {
                return Err(Error::input(format!(
                    "line {} carries no entity triple: {e}",
                    line_no + 1
                )))
            }
        }
    }
    Ok(entities)
}

/// One (test, method) pair per line, for link oracles and predictions.
#[derive(Debug, Serialize, Deserialize)]
pub struct LinkPairRecord {
    pub test: EntityRecord,
    pub method: EntityRecord,
}

/// Read (test, method) pairs, skipping tagged non-link records so a
/// previous `evaluate links` output works as a `--predicted` file.
pub fn read_link_file(path: &Path) -> Result<BTreeSet<(EntityId, EntityId)>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read `{}`: {e}", path.display())))?;
    let mut pairs = BTreeSet::new();
    for (line_no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value = serde_json::from_str(line).map_err(|e| {
            Error::input(format!("malformed record on line {}: {e}", line_no + 1))
        })?;
        match serde_json::from_value::<LinkPairRecord>(value.clone()) {
            Ok(record) => {
                pairs.insert((record.test.into(), record.method.into()));
            }
            Err(_) if value.get("record").is_some() => continue,
            Err(e) => {
                return Err(Error::input(format!(
                    "line {} carries no link pair: {e}",
                    line_no + 1
                )))
            }
        }
    }
    Ok(pairs)
}
