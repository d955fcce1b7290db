//! Unified-diff hunk parsing and mapping of changed lines onto
//! extracted entities.
//!
//! Diffs are consumed with zero context lines, so each `@@` header
//! describes exactly the deleted range (old file coordinates) and the
//! added range (new file coordinates).

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::extract::source::EntityLocator;

/// One contiguous run of changed lines. `old_range`/`new_range` are
/// `(start, len)` pairs in 1-based line coordinates of the respective
/// file version; a zero length marks a pure insertion or deletion on
/// that side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffHunk {
    pub file_path: String,
    pub old_range: (usize, usize),
    pub new_range: (usize, usize),
}

/// All hunks of one file within a commit diff.
#[derive(Clone, Debug, Default)]
pub struct FileDiff {
    pub old_path: Option<String>,
    pub new_path: Option<String>,
    pub hunks: Vec<DiffHunk>,
    pub is_binary: bool,
}

impl FileDiff {
    /// The repo path this diff belongs to. With rename detection off,
    /// old and new agree whenever both exist.
    pub fn path(&self) -> Option<&str> {
        self.new_path.as_deref().or(self.old_path.as_deref())
    }
}

fn parse_range(text: &str) -> Result<(usize, usize)> {
    let text = text.trim_start_matches(['-', '+']);
    let (start, len) = match text.split_once(',') {
        Some((start, len)) => (start, len),
        None => (text, "1"),
    };
    let start = start
        .parse()
        .map_err(|_| Error::input(format!("bad hunk range `{text}`")))?;
    let len = len
        .parse()
        .map_err(|_| Error::input(format!("bad hunk range `{text}`")))?;
    Ok((start, len))
}

fn strip_git_prefix(path: &str) -> Option<String> {
    if path == "/dev/null" {
        return None;
    }
    let stripped = path
        .strip_prefix("a/")
        .or_else(|| path.strip_prefix("b/"))
        .unwrap_or(path);
    Some(stripped.to_string())
}

/// Parse the output of a zero-context `git diff` into per-file hunk
/// lists. Binary files are flagged and carry no hunks.
pub fn parse_unified_diff(text: &str) -> Result<Vec<FileDiff>> {
    let mut diffs: Vec<FileDiff> = Vec::new();
    let mut current: Option<FileDiff> = None;
    for line in text.lines() {
        if line.starts_with("diff --git ") {
            if let Some(done) = current.take() {
                diffs.push(done);
            }
            current = Some(FileDiff::default());
        } else if let Some(file) = current.as_mut() {
            // File headers only appear before the first hunk; later
            // matches would be content lines of the diff body.
            let in_preamble = file.hunks.is_empty();
            if in_preamble && line.starts_with("--- ") {
                file.old_path = strip_git_prefix(line[4..].trim());
            } else if in_preamble && line.starts_with("+++ ") {
                file.new_path = strip_git_prefix(line[4..].trim());
            } else if in_preamble
                && (line.starts_with("Binary files ") || line.starts_with("GIT binary patch"))
            {
                file.is_binary = true;
            } else if let Some(header) = line.strip_prefix("@@ ") {
                let body = header
                    .split(" @@")
                    .next()
                    .ok_or_else(|| Error::input(format!("bad hunk header `{line}`")))?;
                let mut parts = body.split_whitespace();
                let old = parts
                    .next()
                    .ok_or_else(|| Error::input(format!("bad hunk header `{line}`")))?;
                let new = parts
                    .next()
                    .ok_or_else(|| Error::input(format!("bad hunk header `{line}`")))?;
                let old_range = parse_range(old)?;
                let new_range = parse_range(new)?;
                let path = file
                    .new_path
                    .clone()
                    .or_else(|| file.old_path.clone())
                    .ok_or_else(|| Error::input("hunk before file header".to_string()))?;
                file.hunks.push(DiffHunk {
                    file_path: path,
                    old_range,
                    new_range,
                });
            }
        }
    }
    if let Some(done) = current.take() {
        diffs.push(done);
    }
    Ok(diffs)
}

fn overlaps(locator: &EntityLocator, range: (usize, usize)) -> bool {
    let (start, len) = range;
    if len == 0 {
        return false;
    }
    let end = start + len - 1;
    start <= locator.end_line && locator.start_line <= end
}

/// An entity changed iff any deleted line overlaps its old range or
/// any added line overlaps its new range. The result is the union over
/// hunks keyed by qualified name, so a method edited and moved within
/// the file still yields one change.
pub fn map_diff_to_entities(
    old_locators: &[EntityLocator],
    new_locators: &[EntityLocator],
    hunks: &[DiffHunk],
) -> BTreeSet<String> {
    let mut changed = BTreeSet::new();
    for hunk in hunks {
        for locator in old_locators {
            if overlaps(locator, hunk.old_range) {
                changed.insert(locator.qualified_name.clone());
            }
        }
        for locator in new_locators {
            if overlaps(locator, hunk.new_range) {
                changed.insert(locator.qualified_name.clone());
            }
        }
    }
    changed
}
