#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Runs the built binary inside `dir`, so diagnostics carry short file names.
pub fn acsplit_in(dir: &Path, args: &[&str], units: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_acsplit"));
    cmd.current_dir(dir).args(args).env_remove("AC_UNITS");
    if let Some(units) = units {
        cmd.env("AC_UNITS", units);
    }
    cmd.output().expect("spawn acsplit")
}

pub fn acsplit(args: &[&str]) -> Output {
    acsplit_in(&corpus_dir(), args, None)
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

pub fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

/// A writable copy of the corpus.
pub fn corpus_copy() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(corpus_dir()).unwrap() {
        let path = entry.unwrap().path();
        fs::copy(&path, dir.path().join(path.file_name().unwrap())).unwrap();
    }
    dir
}

pub fn edit(dir: &Path, file: &str, from: &str, to: &str) {
    let path = dir.join(file);
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.contains(from), "{file} lacks {from:?}");
    fs::write(&path, text.replacen(from, to, 1)).unwrap();
}

/// Golden outputs for DOT and JSON. Set ACSPLIT_BLESS=1 to rewrite them.
pub const GOLDEN: &[(&str, &[&str])] = &[
    ("tac_mrgfus.dot", &["render", "tac_mrgfus.acd"]),
    ("monolithic_collapsed.dot", &["render", "monolithic_mrgfus.acd", "--collapse-modules", "--no-contexts"]),
    ("bundle_multi.dot", &["render", "bundle_multi.acb"]),
    ("bundle_mrgfus_impact.dot", &["render", "bundle_mrgfus.acb", "--highlight", "TAC-1.C2,CAC-UF.C4", "--rank-sep", "1.25"]),
    ("validate_bundle_multi.json", &["validate", "bundle_multi.acb", "--json"]),
    ("validate_bad_s1.json", &["validate", "bad_s1.acb", "--json"]),
    ("metrics_bundle_multi.json", &["metrics", "bundle_multi.acb", "--json"]),
    ("impact_tac_c2.json", &["impact", "bundle_multi.acb", "--changed", "TAC-1.C2", "--json"]),
];

/// Every subcommand on the corpus, for determinism checks.
pub const ALL_COMMANDS: &[&[&str]] = &[
    &["validate", "bundle_multi.acb"],
    &["validate", "bad_s1.acb"],
    &["validate", "tac_mrgfus.acd", "--json"],
    &["link", "bundle_multi.acb"],
    &["impact", "bundle_multi.acb", "--changed", "TAC-1.C3-1"],
    &["impact", "bundle_multi.acb", "--changed", "CAC-PC.C2,TAC-1.E2-1", "--json"],
    &["inline", "bundle_multi.acb", "--cac", "CAC-PC"],
    &["render", "bundle_mrgfus.acb", "--no-contexts"],
    &["render", "cac_uterine_fibroids.acd"],
    &["metrics", "bundle_multi.acb"],
    &["metrics", "monolithic_mrgfus.acd", "--json"],
    &["fmt", "tac_mrgfus.acd"],
    &["fmt", "cac_pancreatic_cancer.acd", "--check"],
    &["rules"],
    &["rules", "--markdown"],
];

/// Compares every golden file, or rewrites them when blessing.
pub fn check_golden() -> Result<(), String> {
    let bless = std::env::var_os("ACSPLIT_BLESS").is_some();
    for (name, args) in GOLDEN {
        let out = acsplit(args);
        let text = stdout(&out);
        let path = golden_dir().join(name);
        if bless {
            fs::write(&path, &text).unwrap();
            continue;
        }
        let expected = fs::read_to_string(&path).map_err(|e| format!("{name}: {e}"))?;
        if text != expected {
            return Err(format!("{name} differs from `acsplit {}`", args.join(" ")));
        }
    }
    Ok(())
}

pub fn check_repeatable() -> Result<(), String> {
    for args in ALL_COMMANDS {
        let first = acsplit(args);
        for _ in 0..2 {
            let again = acsplit(args);
            if again.stdout != first.stdout || again.stderr != first.stderr || again.status != first.status {
                return Err(format!("`acsplit {}` is not repeatable", args.join(" ")));
            }
        }
    }
    Ok(())
}
