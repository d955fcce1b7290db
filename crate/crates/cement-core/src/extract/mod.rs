//! Repository ingestion: turn per-commit diffs and file snapshots into
//! change timelines.
//!
//! For each commit on the first-parent chain (oldest first) the diff
//! against the first parent is parsed, method/test locators are
//! extracted for both file versions, changed lines are mapped onto
//! entities, and one revision per changed entity is recorded. An
//! alternative path ingests a pre-extracted change log and bypasses
//! source extraction entirely.

pub mod classify;
pub mod diff;
pub mod git;
pub mod source;

use std::collections::{BTreeSet, HashMap};
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::history::{
    linearize_commits, merge_histories, ChangeHistory, EntityId, EntityKind, HistoryBuilder,
    HistoryMeta,
};
use classify::{classify_entity, ClassifierConfig, CompiledClassifier};
use diff::{map_diff_to_entities, parse_unified_diff};
use git::GitRepo;
use source::{extract_entities, EntityLocator, Extraction, LanguageHint};

/// Pluggable source extractor. Sealed: the heuristic Java-like
/// extractor is the only implementation that ships, but the seam keeps
/// precise parsers possible without touching the pipeline.
pub trait EntityExtractor: sealed::Sealed {
    fn extract(&self, file_path: &str, content: &str) -> Extraction;
}

mod sealed {
    pub trait Sealed {}
}

#[derive(Debug, Default)]
pub struct JavaLikeExtractor;

impl sealed::Sealed for JavaLikeExtractor {}

impl EntityExtractor for JavaLikeExtractor {
    fn extract(&self, file_path: &str, content: &str) -> Extraction {
        extract_entities(file_path, content, LanguageHint::JavaLike)
    }
}

/// Counters for conditions that do not abort ingestion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IngestWarnings {
    /// Same (path, name) classified differently in a later commit;
    /// the first classification won.
    pub kind_conflicts: usize,
    /// Files whose extraction was best-effort (unbalanced braces).
    pub best_effort_files: usize,
    /// File snapshots skipped entirely (binary or unreadable).
    pub skipped_files: usize,
}

#[derive(Debug)]
pub struct IngestOutcome {
    pub history: ChangeHistory,
    pub warnings: IngestWarnings,
}

fn repo_id_for(chain_root: &str) -> String {
    format!("git:{chain_root}")
}

/// Ingest a repository from scratch.
pub fn ingest_repository(
    repo_path: &Path,
    head: Option<&str>,
    config: &ClassifierConfig,
) -> Result<IngestOutcome> {
    let repo = GitRepo::open(repo_path)?;
    let head = repo.resolve(head)?;
    let raw = repo.raw_commits(&head)?;
    let chain = linearize_commits(&raw, &head)?;
    mine(&repo, chain, 0, config)
}

/// Ingest only the commits that extend `base`, returning the merged
/// history. The result is value-identical to a fresh ingest over the
/// full range.
pub fn resume_repository(
    repo_path: &Path,
    head: Option<&str>,
    config: &ClassifierConfig,
    base: &ChangeHistory,
) -> Result<IngestOutcome> {
    if base.meta().config_digest != config.digest() {
        return Err(Error::input(
            "classifier config differs from the one the base store was extracted with"
                .to_string(),
        ));
    }
    let repo = GitRepo::open(repo_path)?;
    let head = repo.resolve(head)?;
    let raw = repo.raw_commits(&head)?;
    let chain = linearize_commits(&raw, &head)?;
    if chain.len() < base.num_commits() {
        return Err(Error::input(
            "head is older than the base store's last commit".to_string(),
        ));
    }
    for (stored, fresh) in base.commits().iter().zip(chain.iter()) {
        if stored != fresh {
            return Err(Error::input(format!(
                "base store is not a prefix of the current first-parent chain \
                 (commit {} is `{}` in the store but `{}` in the repository)",
                stored.index, stored.hash, fresh.hash
            )));
        }
    }
    if let Some(root) = chain.first() {
        if base.meta().repo_id != repo_id_for(&root.hash) {
            return Err(Error::input(format!(
                "repository id mismatch: store has `{}`",
                base.meta().repo_id
            )));
        }
    }
    let start = base.num_commits();
    let delta = mine(&repo, chain, start, config)?;
    let history = merge_histories(base, &delta.history)?;
    Ok(IngestOutcome {
        history,
        warnings: delta.warnings,
    })
}

fn mine(
    repo: &GitRepo,
    chain: Vec<crate::history::CommitRef>,
    start: usize,
    config: &ClassifierConfig,
) -> Result<IngestOutcome> {
    let classifier = config.compile()?;
    let extractor = JavaLikeExtractor;
    let repo_id = chain
        .first()
        .map(|root| repo_id_for(&root.hash))
        .unwrap_or_else(|| "git:empty".to_string());
    let meta = HistoryMeta::new(repo_id, config.digest());
    let mut builder = HistoryBuilder::new(chain.clone(), meta);
    let mut warnings = IngestWarnings::default();
    // First classification wins for the lifetime of the id.
    let mut kinds: HashMap<(String, String), EntityKind> = HashMap::new();

    for index in start..chain.len() {
        let new_hash = chain[index].hash.clone();
        let old_hash = index.checked_sub(1).map(|i| chain[i].hash.clone());
        let diff_text = repo.diff(old_hash.as_deref(), &new_hash)?;
        let changed = changed_entities_in_commit(
            repo,
            &extractor,
            &classifier,
            old_hash.as_deref(),
            &new_hash,
            &diff_text,
            &mut kinds,
            &mut warnings,
        )?;
        for id in changed {
            builder.record(id, index);
        }
    }

    Ok(IngestOutcome {
        history: builder.finish()?,
        warnings,
    })
}

fn snapshot_locators(
    repo: &GitRepo,
    extractor: &dyn EntityExtractor,
    commit: Option<&str>,
    path: Option<&str>,
    warnings: &mut IngestWarnings,
) -> Result<Vec<EntityLocator>> {
    let (Some(commit), Some(path)) = (commit, path) else {
        return Ok(Vec::new());
    };
    let Some(content) = repo.file_at(commit, path)? else {
        warnings.skipped_files += 1;
        return Ok(Vec::new());
    };
    if content.contains('\0') {
        warnings.skipped_files += 1;
        return Ok(Vec::new());
    }
    let extraction = extractor.extract(path, &content);
    if extraction.warning {
        warnings.best_effort_files += 1;
    }
    Ok(extraction.locators)
}

#[allow(clippy::too_many_arguments)]
fn changed_entities_in_commit(
    repo: &GitRepo,
    extractor: &dyn EntityExtractor,
    classifier: &CompiledClassifier,
    old_hash: Option<&str>,
    new_hash: &str,
    diff_text: &str,
    kinds: &mut HashMap<(String, String), EntityKind>,
    warnings: &mut IngestWarnings,
) -> Result<BTreeSet<EntityId>> {
    let mut changed = BTreeSet::new();
    for file_diff in parse_unified_diff(diff_text)? {
        if file_diff.is_binary {
            warnings.skipped_files += 1;
            continue;
        }
        let Some(path) = file_diff.path().map(str::to_string) else {
            continue;
        };
        if classifier.path_ignored(&path) {
            continue;
        }
        let old_locators = snapshot_locators(
            repo,
            extractor,
            old_hash,
            file_diff.old_path.as_deref(),
            warnings,
        )?;
        let new_locators = snapshot_locators(
            repo,
            extractor,
            Some(new_hash),
            file_diff.new_path.as_deref(),
            warnings,
        )?;
        let names = map_diff_to_entities(&old_locators, &new_locators, &file_diff.hunks);
        for name in names {
            let locator = new_locators
                .iter()
                .chain(old_locators.iter())
                .find(|loc| loc.qualified_name == name)
                .expect("changed name comes from a locator");
            let Some(kind) = classify_entity(locator, classifier).kind() else {
                continue;
            };
            let kind = resolve_kind(kinds, &path, &name, kind, warnings);
            changed.insert(EntityId::new(kind, path.clone(), name));
        }
    }
    Ok(changed)
}

fn resolve_kind(
    kinds: &mut HashMap<(String, String), EntityKind>,
    path: &str,
    name: &str,
    observed: EntityKind,
    warnings: &mut IngestWarnings,
) -> EntityKind {
    match kinds.get(&(path.to_string(), name.to_string())) {
        Some(&first) => {
            if first != observed {
                warnings.kind_conflicts += 1;
            }
            first
        }
        None => {
            kinds.insert((path.to_string(), name.to_string()), observed);
            observed
        }
    }
}

/// One record of the pre-extracted change-log input, ordered
/// oldest-first. Commit indices are assigned by the tool.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChangeLogRecord {
    pub commit_hash: String,
    pub kind: EntityKind,
    pub file_path: String,
    pub qualified_name: String,
}

/// Digest marker for stores built from a change log rather than from
/// source extraction.
pub fn changelog_digest() -> String {
    let canonical = serde_json::json!({
        "granularity": "method",
        "source": "changelog",
    });
    use sha2::{Digest, Sha256};
    let mut hasher = Sha256::new();
    hasher.update(canonical.to_string().as_bytes());
    format!("{:x}", hasher.finalize())
}

/// Build a history from a pre-extracted change log. Users with better
/// tooling can bypass source extraction entirely.
pub fn ingest_changelog<R: Read>(input: R) -> Result<IngestOutcome> {
    let reader = BufReader::new(input);
    let mut records = Vec::new();
    for (line_no, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: ChangeLogRecord = serde_json::from_str(&line).map_err(|e| {
            Error::input(format!("malformed change-log record on line {}: {e}", line_no + 1))
        })?;
        records.push(record);
    }

    let mut commit_index: HashMap<String, usize> = HashMap::new();
    let mut chain = Vec::new();
    let mut last_hash: Option<String> = None;
    for record in &records {
        match commit_index.get(&record.commit_hash) {
            Some(_) => {
                if last_hash.as_deref() != Some(record.commit_hash.as_str()) {
                    return Err(Error::input(format!(
                        "change log is not ordered oldest-first: commit `{}` reappears",
                        record.commit_hash
                    )));
                }
            }
            None => {
                let index = chain.len();
                commit_index.insert(record.commit_hash.clone(), index);
                chain.push(crate::history::CommitRef {
                    hash: record.commit_hash.clone(),
                    index,
                });
                last_hash = Some(record.commit_hash.clone());
            }
        }
    }

    let repo_id = chain
        .first()
        .map(|root| format!("log:{}", root.hash))
        .unwrap_or_else(|| "log:empty".to_string());
    let meta = HistoryMeta::new(repo_id, changelog_digest());
    let mut builder = HistoryBuilder::new(chain, meta);
    let mut warnings = IngestWarnings::default();
    let mut kinds: HashMap<(String, String), EntityKind> = HashMap::new();
    for record in records {
        let kind = resolve_kind(
            &mut kinds,
            &record.file_path,
            &record.qualified_name,
            record.kind,
            &mut warnings,
        );
        let index = commit_index[&record.commit_hash];
        builder.record(
            EntityId::new(kind, record.file_path, record.qualified_name),
            index,
        );
    }

    Ok(IngestOutcome {
        history: builder.finish()?,
        warnings,
    })
}
