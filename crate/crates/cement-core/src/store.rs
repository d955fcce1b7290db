//! Persistent history store: line-delimited records, one JSON object
//! per line.
//!
//! Layout is positional: line 1 is the header, the next `num_commits`
//! lines are commit records, every remaining line is an entity record.
//! Field order is fixed and unknown fields are rejected, so a store
//! written from the same history is byte-identical across runs.

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::history::{ChangeHistory, CommitRef, EntityId, EntityKind, HistoryMeta};

pub const STORE_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HeaderRecord {
    version: u32,
    repo_id: String,
    num_commits: usize,
    config_digest: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CommitRecord {
    index: usize,
    hash: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntityRecord {
    kind: EntityKind,
    file_path: String,
    qualified_name: String,
    revisions: Vec<usize>,
}

/// Serialize a history to the line-delimited store format.
pub fn write_store<W: Write>(history: &ChangeHistory, mut out: W) -> Result<()> {
    let header = HeaderRecord {
        version: STORE_VERSION,
        repo_id: history.meta().repo_id.clone(),
        num_commits: history.num_commits(),
        config_digest: history.meta().config_digest.clone(),
    };
    writeln!(out, "{}", serde_json::to_string(&header).expect("header"))?;
    for commit in history.commits() {
        let record = CommitRecord {
            index: commit.index,
            hash: commit.hash.clone(),
        };
        writeln!(out, "{}", serde_json::to_string(&record).expect("commit"))?;
    }
    for (id, revs) in history.entities() {
        let record = EntityRecord {
            kind: id.kind,
            file_path: id.file_path.clone(),
            qualified_name: id.qualified_name.clone(),
            revisions: revs.to_vec(),
        };
        writeln!(out, "{}", serde_json::to_string(&record).expect("entity"))?;
    }
    Ok(())
}

/// Parse a store. Every structural invariant is re-checked on load.
pub fn read_store<R: Read>(input: R) -> Result<ChangeHistory> {
    let mut lines = BufReader::new(input).lines();
    let header_line = lines
        .next()
        .ok_or_else(|| Error::input("empty store: missing header"))??;
    let header: HeaderRecord = serde_json::from_str(&header_line)
        .map_err(|e| Error::input(format!("malformed store header: {e}")))?;
    if header.version != STORE_VERSION {
        return Err(Error::input(format!(
            "unsupported store version {} (expected {STORE_VERSION})",
            header.version
        )));
    }

    let mut commits = Vec::with_capacity(header.num_commits);
    for position in 0..header.num_commits {
        let line = lines.next().ok_or_else(|| {
            Error::input(format!(
                "truncated store: expected {} commit records, found {position}",
                header.num_commits
            ))
        })??;
        let record: CommitRecord = serde_json::from_str(&line)
            .map_err(|e| Error::input(format!("malformed commit record: {e}")))?;
        commits.push(CommitRef {
            hash: record.hash,
            index: record.index,
        });
    }

    let mut revisions = std::collections::BTreeMap::new();
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: EntityRecord = serde_json::from_str(&line)
            .map_err(|e| Error::input(format!("malformed entity record: {e}")))?;
        let id = EntityId::new(record.kind, record.file_path, record.qualified_name);
        if revisions.insert(id.clone(), record.revisions).is_some() {
            return Err(Error::input(format!("duplicate entity record for `{id}`")));
        }
    }

    let meta = HistoryMeta {
        repo_id: header.repo_id,
        config_digest: header.config_digest,
        created_at: None,
    };
    ChangeHistory::new(commits, revisions, meta)
}

pub fn save_store(history: &ChangeHistory, path: &Path) -> Result<()> {
    let mut buffer = Vec::new();
    write_store(history, &mut buffer)?;
    fs::write(path, buffer)?;
    Ok(())
}

pub fn load_store(path: &Path) -> Result<ChangeHistory> {
    let file = fs::File::open(path)
        .map_err(|e| Error::input(format!("cannot open store `{}`: {e}", path.display())))?;
    read_store(file)
}

/// Hex SHA-256 of arbitrary bytes; used for store provenance in outputs.
pub fn digest_bytes(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    format!("{:x}", hasher.finalize())
}

pub fn digest_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path)
        .map_err(|e| Error::input(format!("cannot read `{}`: {e}", path.display())))?;
    Ok(digest_bytes(&bytes))
}
