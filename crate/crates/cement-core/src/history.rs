//! Entities, linearized commits and per-entity change timelines.
//!
//! A [`ChangeHistory`] is the unit everything else operates on: an
//! ordered commit sequence (first-parent linearization of the mined
//! branch) plus, for every method or test that ever changed, the
//! strictly increasing list of commit indices at which it changed.
//! Histories are immutable after construction; updates produce new
//! values (see [`merge_histories`]).

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::time::SystemTime;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntityKind {
    Method,
    Test,
}

impl EntityKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EntityKind::Method => "method",
            EntityKind::Test => "test",
        }
    }
}

/// Stable identity of a method or test across the history.
///
/// Identity is path-scoped: renames and moves break timelines. The
/// `(kind, file_path, qualified_name)` triple is unique within one
/// [`ChangeHistory`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EntityId {
    pub kind: EntityKind,
    pub file_path: String,
    pub qualified_name: String,
}

impl EntityId {
    pub fn new(
        kind: EntityKind,
        file_path: impl Into<String>,
        qualified_name: impl Into<String>,
    ) -> Self {
        EntityId {
            kind,
            file_path: file_path.into(),
            qualified_name: qualified_name.into(),
        }
    }

    pub fn method(file_path: impl Into<String>, qualified_name: impl Into<String>) -> Self {
        EntityId::new(EntityKind::Method, file_path, qualified_name)
    }

    pub fn test(file_path: impl Into<String>, qualified_name: impl Into<String>) -> Self {
        EntityId::new(EntityKind::Test, file_path, qualified_name)
    }

    /// Parse the display form `kind:file_path#qualified_name`.
    pub fn parse(text: &str) -> Result<Self> {
        let (kind, rest) = text
            .split_once(':')
            .ok_or_else(|| Error::input(format!("malformed entity id `{text}`: missing `:`")))?;
        let kind = match kind {
            "method" => EntityKind::Method,
            "test" => EntityKind::Test,
            other => {
                return Err(Error::input(format!(
                    "malformed entity id `{text}`: unknown kind `{other}`"
                )))
            }
        };
        let (file_path, qualified_name) = rest
            .rsplit_once('#')
            .ok_or_else(|| Error::input(format!("malformed entity id `{text}`: missing `#`")))?;
        if file_path.is_empty() || qualified_name.is_empty() {
            return Err(Error::input(format!(
                "malformed entity id `{text}`: empty path or name"
            )));
        }
        Ok(EntityId::new(kind, file_path, qualified_name))
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}#{}",
            self.kind.as_str(),
            self.file_path,
            self.qualified_name
        )
    }
}

/// A commit in the linearized sequence. `index` 0 is the oldest commit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommitRef {
    pub hash: String,
    pub index: usize,
}

/// Raw commit data as read from the VCS, prior to linearization.
#[derive(Clone, Debug)]
pub struct RawCommit {
    pub hash: String,
    pub parents: Vec<String>,
    pub timestamp: i64,
}

/// Run metadata. `created_at` records when the history was extracted;
/// it is not persisted and takes no part in value equality.
#[derive(Clone, Debug)]
pub struct HistoryMeta {
    pub repo_id: String,
    pub config_digest: String,
    pub created_at: Option<SystemTime>,
}

impl HistoryMeta {
    pub fn new(repo_id: impl Into<String>, config_digest: impl Into<String>) -> Self {
        HistoryMeta {
            repo_id: repo_id.into(),
            config_digest: config_digest.into(),
            created_at: Some(SystemTime::now()),
        }
    }
}

/// Per-entity change timelines over a linearized commit sequence.
#[derive(Clone, Debug)]
pub struct ChangeHistory {
    commits: Vec<CommitRef>,
    revisions: BTreeMap<EntityId, Vec<usize>>,
    meta: HistoryMeta,
}

impl PartialEq for ChangeHistory {
    fn eq(&self, other: &Self) -> bool {
        // Value identity covers content and provenance, not the wall
        // clock of the extraction run.
        self.commits == other.commits
            && self.revisions == other.revisions
            && self.meta.repo_id == other.meta.repo_id
            && self.meta.config_digest == other.meta.config_digest
    }
}

impl Eq for ChangeHistory {}

impl ChangeHistory {
    /// Build a history, validating every structural invariant.
    pub fn new(
        commits: Vec<CommitRef>,
        revisions: BTreeMap<EntityId, Vec<usize>>,
        meta: HistoryMeta,
    ) -> Result<Self> {
        let mut hashes = HashSet::new();
        for (position, commit) in commits.iter().enumerate() {
            if commit.index != position {
                return Err(Error::input(format!(
                    "commit `{}` has index {} but sits at position {}",
                    commit.hash, commit.index, position
                )));
            }
            if !hashes.insert(commit.hash.as_str()) {
                return Err(Error::input(format!(
                    "duplicate commit hash `{}`",
                    commit.hash
                )));
            }
        }
        for (id, revs) in &revisions {
            if revs.is_empty() {
                return Err(Error::input(format!("entity `{id}` has no revisions")));
            }
            for pair in revs.windows(2) {
                if pair[0] >= pair[1] {
                    return Err(Error::input(format!(
                        "revisions of `{id}` are not strictly increasing"
                    )));
                }
            }
            let last = *revs.last().expect("non-empty");
            if last >= commits.len() {
                return Err(Error::input(format!(
                    "revision index {last} of `{id}` is out of range (num_commits = {})",
                    commits.len()
                )));
            }
        }
        Ok(ChangeHistory {
            commits,
            revisions,
            meta,
        })
    }

    pub fn commits(&self) -> &[CommitRef] {
        &self.commits
    }

    pub fn num_commits(&self) -> usize {
        self.commits.len()
    }

    pub fn meta(&self) -> &HistoryMeta {
        &self.meta
    }

    /// The stored timeline of an entity, or `None` when the entity has
    /// no recorded history. Absence is a value, not an error.
    pub fn revisions_of(&self, id: &EntityId) -> Option<&[usize]> {
        self.revisions.get(id).map(Vec::as_slice)
    }

    pub fn entities(&self) -> impl Iterator<Item = (&EntityId, &[usize])> {
        self.revisions.iter().map(|(id, revs)| (id, revs.as_slice()))
    }

    pub fn entity_ids(&self) -> impl Iterator<Item = &EntityId> {
        self.revisions.keys()
    }

    pub fn num_entities(&self) -> usize {
        self.revisions.len()
    }

    pub fn commit_by_hash(&self, hash: &str) -> Option<&CommitRef> {
        self.commits.iter().find(|commit| commit.hash == hash)
    }

    /// Drop every revision after `cutoff_index`, keeping the commit
    /// sequence up to and including the cutoff commit. Entities whose
    /// timeline becomes empty disappear from the result.
    pub fn truncate_at(&self, cutoff_index: usize) -> Result<ChangeHistory> {
        if cutoff_index >= self.commits.len() {
            return Err(Error::input(format!(
                "cutoff index {cutoff_index} out of range (num_commits = {})",
                self.commits.len()
            )));
        }
        let commits = self.commits[..=cutoff_index].to_vec();
        let revisions: BTreeMap<EntityId, Vec<usize>> = self
            .revisions
            .iter()
            .filter_map(|(id, revs)| {
                let kept: Vec<usize> =
                    revs.iter().copied().take_while(|&r| r <= cutoff_index).collect();
                if kept.is_empty() {
                    None
                } else {
                    Some((id.clone(), kept))
                }
            })
            .collect();
        ChangeHistory::new(commits, revisions, self.meta.clone())
    }
}

/// First-parent linearization of a commit DAG.
///
/// Walks first-parent links from `head` back to the root and returns
/// the chain oldest-first with indices `0..n`. Commits reachable only
/// through non-first parents are dropped; a merge therefore counts as
/// one step on the mainline.
pub fn linearize_commits(raw_commits: &[RawCommit], head: &str) -> Result<Vec<CommitRef>> {
    let mut by_hash: HashMap<&str, &RawCommit> = HashMap::with_capacity(raw_commits.len());
    for commit in raw_commits {
        if by_hash.insert(commit.hash.as_str(), commit).is_some() {
            return Err(Error::input(format!(
                "duplicate commit hash `{}`",
                commit.hash
            )));
        }
    }
    let mut chain = Vec::new();
    let mut seen = HashSet::new();
    let mut cursor = by_hash
        .get(head)
        .copied()
        .ok_or_else(|| Error::input(format!("head `{head}` not found among commits")))?;
    loop {
        if !seen.insert(cursor.hash.as_str()) {
            return Err(Error::input(format!(
                "parent cycle through commit `{}`",
                cursor.hash
            )));
        }
        chain.push(cursor.hash.clone());
        match cursor.parents.first() {
            None => break,
            Some(parent) => {
                cursor = by_hash.get(parent.as_str()).copied().ok_or_else(|| {
                    Error::input(format!(
                        "commit `{}` references unknown parent `{parent}`",
                        cursor.hash
                    ))
                })?;
            }
        }
    }
    chain.reverse();
    Ok(chain
        .into_iter()
        .enumerate()
        .map(|(index, hash)| CommitRef { hash, index })
        .collect())
}

/// Extend `base` with the revisions mined into `delta`.
///
/// `delta` must carry the full commit sequence with `base`'s commits as
/// a prefix, and both sides must come from the same repository and
/// extraction config. Entities whose kind differs between the two sides
/// keep the kind `base` saw first, mirroring batch ingestion where the
/// first classification wins. The result is value-identical to ingesting
/// the whole range in one pass.
pub fn merge_histories(base: &ChangeHistory, delta: &ChangeHistory) -> Result<ChangeHistory> {
    if base.meta.repo_id != delta.meta.repo_id {
        return Err(Error::input(format!(
            "repo id mismatch: base `{}` vs delta `{}`",
            base.meta.repo_id, delta.meta.repo_id
        )));
    }
    if base.meta.config_digest != delta.meta.config_digest {
        return Err(Error::input(
            "config digest mismatch between base and delta".to_string(),
        ));
    }
    if delta.commits.len() < base.commits.len() {
        return Err(Error::input(
            "delta commit sequence is shorter than the base".to_string(),
        ));
    }
    for (ours, theirs) in base.commits.iter().zip(delta.commits.iter()) {
        if ours != theirs {
            return Err(Error::input(format!(
                "base is not a prefix of delta: commit {} is `{}` vs `{}`",
                ours.index, ours.hash, theirs.hash
            )));
        }
    }

    // First classification wins: kinds recorded by base take precedence.
    let mut kind_by_key: HashMap<(&str, &str), EntityKind> = HashMap::new();
    for id in base.revisions.keys() {
        kind_by_key.insert((&id.file_path, &id.qualified_name), id.kind);
    }

    let mut merged: BTreeMap<EntityId, Vec<usize>> = base.revisions.clone();
    for (id, revs) in &delta.revisions {
        let kind = kind_by_key
            .get(&(id.file_path.as_str(), id.qualified_name.as_str()))
            .copied()
            .unwrap_or(id.kind);
        let resolved = EntityId::new(kind, id.file_path.clone(), id.qualified_name.clone());
        let entry = merged.entry(resolved).or_default();
        entry.extend(revs.iter().copied());
        entry.sort_unstable();
        entry.dedup();
    }

    let meta = HistoryMeta {
        repo_id: delta.meta.repo_id.clone(),
        config_digest: delta.meta.config_digest.clone(),
        created_at: delta.meta.created_at,
    };
    ChangeHistory::new(delta.commits.clone(), merged, meta)
}

/// Incremental builder used by ingestion. Revisions must be recorded in
/// ascending commit order; a repeated (entity, index) pair collapses to
/// one revision.
#[derive(Debug)]
pub struct HistoryBuilder {
    commits: Vec<CommitRef>,
    revisions: BTreeMap<EntityId, Vec<usize>>,
    meta: HistoryMeta,
}

impl HistoryBuilder {
    pub fn new(commits: Vec<CommitRef>, meta: HistoryMeta) -> Self {
        HistoryBuilder {
            commits,
            revisions: BTreeMap::new(),
            meta,
        }
    }

    pub fn record(&mut self, id: EntityId, commit_index: usize) {
        let revs = self.revisions.entry(id).or_default();
        match revs.last() {
            Some(&last) if last == commit_index => {}
            Some(&last) => {
                debug_assert!(last < commit_index, "revisions recorded out of order");
                revs.push(commit_index);
            }
            None => revs.push(commit_index),
        }
    }

    pub fn finish(self) -> Result<ChangeHistory> {
        ChangeHistory::new(self.commits, self.revisions, self.meta)
    }
}
