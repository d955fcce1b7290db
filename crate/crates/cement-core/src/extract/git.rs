//! Thin wrapper over the `git` command-line interface.
//!
//! Everything the pipeline needs from the VCS: the commit DAG below a
//! head (`log`), per-commit zero-context diffs (`diff`), and file
//! snapshots at a commit (`show`).

use std::path::{Path, PathBuf};
use std::process::Command;

use crate::error::{Error, Result};
use crate::history::RawCommit;

pub struct GitRepo {
    root: PathBuf,
}

impl GitRepo {
    /// Open a repository; fails fast when the path is not readable by
    /// git.
    pub fn open(path: &Path) -> Result<Self> {
        let repo = GitRepo {
            root: path.to_path_buf(),
        };
        repo.run(&["rev-parse", "--git-dir"])?;
        Ok(repo)
    }

    fn run(&self, args: &[&str]) -> Result<String> {
        let output = Command::new("git")
            .arg("-C")
            .arg(&self.root)
            .args(args)
            .output()
            .map_err(|e| Error::fatal(format!("cannot invoke git: {e}")))?;
        if !output.status.success() {
            let stderr = String::from_utf8_lossy(&output.stderr);
            return Err(Error::fatal(format!(
                "git {} failed in `{}`: {}",
                args.first().copied().unwrap_or(""),
                self.root.display(),
                stderr.trim()
            )));
        }
        String::from_utf8(output.stdout)
            .map_err(|_| Error::fatal("git produced non-UTF-8 output".to_string()))
    }

    /// Resolve a ref (or HEAD) to a full commit hash.
    pub fn resolve(&self, revision: Option<&str>) -> Result<String> {
        let rev = revision.unwrap_or("HEAD");
        let out = self.run(&["rev-parse", "--verify", &format!("{rev}^{{commit}}")])?;
        Ok(out.trim().to_string())
    }

    /// All commits reachable from `head` with parent hashes and author
    /// timestamps, as input for first-parent linearization.
    pub fn raw_commits(&self, head: &str) -> Result<Vec<RawCommit>> {
        let out = self.run(&["log", "--format=%H%x00%P%x00%at", head])?;
        let mut commits = Vec::new();
        for line in out.lines() {
            let mut fields = line.split('\0');
            let hash = fields
                .next()
                .ok_or_else(|| Error::fatal("malformed git log line".to_string()))?;
            let parents = fields.next().unwrap_or("");
            let timestamp = fields
                .next()
                .and_then(|t| t.trim().parse().ok())
                .unwrap_or(0);
            commits.push(RawCommit {
                hash: hash.to_string(),
                parents: parents.split_whitespace().map(str::to_string).collect(),
                timestamp,
            });
        }
        Ok(commits)
    }

    /// Zero-context diff between two points of the first-parent chain.
    /// `old = None` diffs the root commit against the empty tree.
    /// Renames stay off: a rename is a delete plus an add.
    pub fn diff(&self, old: Option<&str>, new: &str) -> Result<String> {
        match old {
            Some(old) => self.run(&["diff", "-U0", "--no-renames", old, new]),
            None => self.run(&[
                "show",
                "-U0",
                "--no-renames",
                "--format=",
                new,
            ]),
        }
    }

    /// File content at a commit; `None` when the path does not exist
    /// there.
    pub fn file_at(&self, commit: &str, path: &str) -> Result<Option<String>> {
        let output = Command::new("git")
            .arg("-C")
            .arg(&self.root)
            .args(["show", &format!("{commit}:{path}")])
            .output()
            .map_err(|e| Error::fatal(format!("cannot invoke git: {e}")))?;
        if !output.status.success() {
            return Ok(None);
        }
        match String::from_utf8(output.stdout) {
            Ok(text) => Ok(Some(text)),
            // Binary content: callers skip it.
            Err(_) => Ok(None),
        }
    }
}
