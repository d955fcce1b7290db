//! Scripted git fixture repositories with a known edit schedule.
//!
//! The generator keeps its own ledger of which entity changed at which
//! mainline commit; ingestion output is checked against that ledger.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;

pub const CALC_PATH: &str = "src/main/java/calc/Calc.java";
pub const UTIL_PATH: &str = "src/main/java/calc/Util.java";
pub const TEST_PATH: &str = "src/test/java/calc/CalcTest.java";

/// Keys of the methods and tests the scripted repo contains.
pub const METHOD_KEYS: &[&str] = &["add", "sub", "mul", "div", "clamp", "lerp"];
pub const TEST_KEYS: &[&str] = &["testAdd", "testSub", "testMul", "testDiv"];

pub struct FixtureRepo {
    #[allow(dead_code)]
    dir: TempDir,
    pub path: PathBuf,
    /// Mainline commit hashes, oldest first.
    pub hashes: Vec<String>,
    /// Edit schedule: entity key -> commit indices where it changed.
    pub ledger: BTreeMap<&'static str, Vec<usize>>,
}

pub fn git(repo: &Path, args: &[&str], date: &str) {
    let status = Command::new("git")
        .arg("-C")
        .arg(repo)
        .args(args)
        .env("GIT_AUTHOR_NAME", "Fixture")
        .env("GIT_AUTHOR_EMAIL", "fixture@example.com")
        .env("GIT_COMMITTER_NAME", "Fixture")
        .env("GIT_COMMITTER_EMAIL", "fixture@example.com")
        .env("GIT_AUTHOR_DATE", date)
        .env("GIT_COMMITTER_DATE", date)
        .env("GIT_CONFIG_GLOBAL", "/dev/null")
        .env("GIT_CONFIG_SYSTEM", "/dev/null")
        .status()
        .expect("git runs");
    assert!(status.success(), "git {args:?} failed");
}

fn date_for(step: usize) -> String {
    format!("2020-01-01T00:{:02}:{:02} +0000", step / 60, step % 60)
}

struct Generator {
    repo: PathBuf,
    versions: BTreeMap<&'static str, u32>,
    step: usize,
    hashes: Vec<String>,
    ledger: BTreeMap<&'static str, Vec<usize>>,
}

impl Generator {
    fn new(repo: &Path) -> Self {
        Generator {
            repo: repo.to_path_buf(),
            versions: METHOD_KEYS
                .iter()
                .chain(TEST_KEYS.iter())
                .map(|&key| (key, 1))
                .collect(),
            step: 0,
            hashes: Vec::new(),
            ledger: BTreeMap::new(),
        }
    }

    fn render_sources(&self) {
        let v = |key: &str| self.versions[key];
        let calc = format!(
            "package calc;\n\npublic class Calc {{\n\n    public int add(int a, int b) {{\n        int state = {};\n        return a + b + state - state;\n    }}\n\n    public int sub(int a, int b) {{\n        int state = {};\n        return a - b + state - state;\n    }}\n\n    public int mul(int a, int b) {{\n        int state = {};\n        return a * b + state - state;\n    }}\n\n    public int div(int a, int b) {{\n        int state = {};\n        return a / b + state - state;\n    }}\n}}\n",
            v("add"),
            v("sub"),
            v("mul"),
            v("div"),
        );
        let util = format!(
            "package calc;\n\npublic class Util {{\n\n    public static int clamp(int x, int lo, int hi) {{\n        int state = {};\n        return Math.max(lo, Math.min(hi, x)) + state - state;\n    }}\n\n    public static int lerp(int a, int b, int t) {{\n        int state = {};\n        return a + (b - a) * t + state - state;\n    }}\n}}\n",
            v("clamp"),
            v("lerp"),
        );
        let tests = format!(
            "package calc;\n\npublic class CalcTest {{\n\n    public void testAdd() {{\n        int probe = {};\n        assert probe > 0;\n    }}\n\n    public void testSub() {{\n        int probe = {};\n        assert probe > 0;\n    }}\n\n    public void testMul() {{\n        int probe = {};\n        assert probe > 0;\n    }}\n\n    public void testDiv() {{\n        int probe = {};\n        assert probe > 0;\n    }}\n}}\n",
            v("testAdd"),
            v("testSub"),
            v("testMul"),
            v("testDiv"),
        );
        let write = |rel: &str, content: &str| {
            let path = self.repo.join(rel);
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(path, content).unwrap();
        };
        write(CALC_PATH, &calc);
        write(UTIL_PATH, &util);
        write(TEST_PATH, &tests);
    }

    fn commit(&mut self, message: &str, record: bool) {
        let date = date_for(self.step);
        self.step += 1;
        git(&self.repo, &["add", "-A"], &date);
        git(&self.repo, &["commit", "-q", "-m", message], &date);
        if record {
            let out = Command::new("git")
                .arg("-C")
                .arg(&self.repo)
                .args(["rev-parse", "HEAD"])
                .output()
                .expect("git rev-parse");
            self.hashes
                .push(String::from_utf8(out.stdout).unwrap().trim().to_string());
        }
    }

    fn mainline(&mut self, bumps: &[&'static str]) {
        let index = self.hashes.len();
        for &key in bumps {
            *self.versions.get_mut(key).unwrap() += 1;
            self.ledger.entry(key).or_default().push(index);
        }
        if bumps.is_empty() {
            let readme = self.repo.join("README.md");
            let mut text = std::fs::read_to_string(&readme).unwrap_or_default();
            text.push_str(&format!("note {}\n", self.step));
            std::fs::write(readme, text).unwrap();
        } else {
            self.render_sources();
        }
        self.commit(&format!("mainline {}", self.hashes.len()), true);
    }
}

/// The scripted 30-commit fixture: deterministic dates and authors, a
/// merge at index 16 whose side branch bumped `mul`, and three
/// no-entity commits.
pub fn scripted_repo() -> FixtureRepo {
    let dir = TempDir::new().expect("tempdir");
    let path = dir.path().to_path_buf();
    git(&path, &["init", "-q", "--initial-branch=main"], &date_for(0));

    let mut generator = Generator::new(&path);

    // Commit 0: everything is born.
    generator.render_sources();
    std::fs::write(path.join("README.md"), "fixture\n").unwrap();
    let index0 = 0;
    for &key in METHOD_KEYS.iter().chain(TEST_KEYS.iter()) {
        generator.ledger.entry(key).or_default().push(index0);
    }
    generator.commit("mainline 0", true);

    let schedule: &[&[&'static str]] = &[
        &["add", "testAdd"],  // 1
        &["sub"],             // 2
        &["testSub"],         // 3
        &[],                  // 4
        &["add", "testAdd"],  // 5
        &["mul"],             // 6
        &["div", "testDiv"],  // 7
        &["clamp"],           // 8
        &["add"],             // 9
        &["testAdd"],         // 10
        &[],                  // 11
        &["lerp", "clamp"],   // 12
        &["sub", "testSub"],  // 13
        &["mul", "testMul"],  // 14
    ];
    for bumps in schedule {
        generator.mainline(bumps);
    }

    // Side branch off commit 14 bumps `mul`; the mainline moves ahead
    // with a README-only commit 15; the merge lands as commit 16.
    git(&path, &["branch", "side"], &date_for(generator.step));
    generator.mainline(&[]); // 15
    git(&path, &["checkout", "-q", "side"], &date_for(generator.step));
    *generator.versions.get_mut("mul").unwrap() += 1;
    generator.render_sources();
    generator.commit("side work", false);
    git(&path, &["checkout", "-q", "main"], &date_for(generator.step));
    let merge_date = date_for(generator.step);
    generator.step += 1;
    git(
        &path,
        &["merge", "-q", "--no-ff", "side", "-m", "merge side"],
        &merge_date,
    );
    let out = Command::new("git")
        .arg("-C")
        .arg(&path)
        .args(["rev-parse", "HEAD"])
        .output()
        .expect("git rev-parse");
    generator
        .hashes
        .push(String::from_utf8(out.stdout).unwrap().trim().to_string());
    generator.ledger.entry("mul").or_default().push(16);

    let tail: &[&[&'static str]] = &[
        &["div"],             // 17
        &["testDiv"],         // 18
        &["add", "testAdd"],  // 19
        &["clamp"],           // 20
        &["lerp"],            // 21
        &["sub"],             // 22
        &["testSub"],         // 23
        &[],                  // 24
        &["mul", "testMul"],  // 25
        &["add"],             // 26
        &["testAdd"],         // 27
        &["div", "testDiv"],  // 28
        &["clamp", "lerp"],   // 29
    ];
    for bumps in tail {
        generator.mainline(bumps);
    }

    assert_eq!(generator.hashes.len(), 30);
    FixtureRepo {
        dir,
        path,
        hashes: generator.hashes,
        ledger: generator.ledger,
    }
}
