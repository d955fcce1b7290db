//! Entity classification: decide whether an extracted entity is a
//! method, a test, or ignored, from path globs and name patterns.

use globset::{Glob, GlobSet, GlobSetBuilder};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::extract::source::EntityLocator;
use crate::history::EntityKind;

/// Classification rules. An empty config classifies everything as a
/// method.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifierConfig {
    pub test_path_globs: Vec<String>,
    pub test_name_patterns: Vec<String>,
    pub ignore_globs: Vec<String>,
}

impl ClassifierConfig {
    /// Conventional defaults for Java-style trees: sources under a
    /// `test` directory or methods named `test*` are tests, generated
    /// sources are ignored.
    pub fn conventional() -> Self {
        ClassifierConfig {
            test_path_globs: vec![
                "**/src/test/**".to_string(),
                "src/test/**".to_string(),
                "**/test/**".to_string(),
                "**/tests/**".to_string(),
            ],
            test_name_patterns: vec!["test*".to_string()],
            ignore_globs: vec!["**/generated/**".to_string()],
        }
    }

    /// Digest over the canonical form of the config plus the entity
    /// granularity this tool mines at (test methods, not test
    /// classes). Stores carry it so that resumed extractions cannot
    /// silently mix rules.
    pub fn digest(&self) -> String {
        let canonical = serde_json::json!({
            "granularity": "method",
            "test_path_globs": self.test_path_globs,
            "test_name_patterns": self.test_name_patterns,
            "ignore_globs": self.ignore_globs,
        });
        let mut hasher = Sha256::new();
        hasher.update(canonical.to_string().as_bytes());
        format!("{:x}", hasher.finalize())
    }

    pub fn compile(&self) -> Result<CompiledClassifier> {
        let build = |patterns: &[String]| -> Result<GlobSet> {
            let mut builder = GlobSetBuilder::new();
            for pattern in patterns {
                let glob = Glob::new(pattern)
                    .map_err(|e| Error::config(format!("bad glob `{pattern}`: {e}")))?;
                builder.add(glob);
            }
            builder
                .build()
                .map_err(|e| Error::config(format!("glob set: {e}")))
        };
        Ok(CompiledClassifier {
            test_paths: build(&self.test_path_globs)?,
            ignore_paths: build(&self.ignore_globs)?,
            test_names: self
                .test_name_patterns
                .iter()
                .map(|p| NamePattern::parse(p))
                .collect(),
        })
    }
}

/// Prefix/suffix name patterns: `test*`, `*Test`, `*test*`, or an
/// exact name. Matched against the simple method name (the segment
/// between the last `.` and the arity suffix).
#[derive(Clone, Debug)]
enum NamePattern {
    Prefix(String),
    Suffix(String),
    Contains(String),
    Exact(String),
}

impl NamePattern {
    fn parse(pattern: &str) -> Self {
        let starts = pattern.starts_with('*');
        let ends = pattern.ends_with('*') && pattern.len() > 1;
        let core = pattern.trim_matches('*').to_string();
        match (starts, ends) {
            (true, true) => NamePattern::Contains(core),
            (true, false) => NamePattern::Suffix(core),
            (false, true) => NamePattern::Prefix(core),
            (false, false) => NamePattern::Exact(core),
        }
    }

    fn matches(&self, name: &str) -> bool {
        match self {
            NamePattern::Prefix(p) => name.starts_with(p.as_str()),
            NamePattern::Suffix(s) => name.ends_with(s.as_str()),
            NamePattern::Contains(c) => name.contains(c.as_str()),
            NamePattern::Exact(e) => name == e,
        }
    }
}

#[derive(Debug)]
pub struct CompiledClassifier {
    test_paths: GlobSet,
    ignore_paths: GlobSet,
    test_names: Vec<NamePattern>,
}

impl CompiledClassifier {
    pub fn path_ignored(&self, file_path: &str) -> bool {
        self.ignore_paths.is_match(file_path)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Method,
    Test,
    Ignored,
}

impl Classification {
    pub fn kind(self) -> Option<EntityKind> {
        match self {
            Classification::Method => Some(EntityKind::Method),
            Classification::Test => Some(EntityKind::Test),
            Classification::Ignored => None,
        }
    }
}

/// Simple method name: `Foo.Bar.testX/2` -> `testX`.
fn simple_name(qualified_name: &str) -> &str {
    let without_arity = qualified_name
        .rsplit_once('/')
        .map(|(name, _)| name)
        .unwrap_or(qualified_name);
    without_arity
        .rsplit_once('.')
        .map(|(_, simple)| simple)
        .unwrap_or(without_arity)
}

/// Pure function of `(locator, config)`: ignored paths first, then
/// test paths or test names, otherwise a method.
pub fn classify_entity(locator: &EntityLocator, config: &CompiledClassifier) -> Classification {
    if config.ignore_paths.is_match(&locator.file_path) {
        return Classification::Ignored;
    }
    if config.test_paths.is_match(&locator.file_path) {
        return Classification::Test;
    }
    let name = simple_name(&locator.qualified_name);
    if config.test_names.iter().any(|p| p.matches(name)) {
        return Classification::Test;
    }
    Classification::Method
}
