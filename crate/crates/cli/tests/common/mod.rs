#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_langrobust")).args(args).env_remove("RUST_LOG").output().expect("binary runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Listening predictions for the fixture: the first `hits` records pick the
/// target, the rest pick the next candidate.
pub fn write_predictions(split: &Path, hits: usize, dest: &Path) {
    let text = std::fs::read_to_string(split).unwrap();
    let mut out = String::new();
    for (i, line) in text.lines().filter(|l| !l.trim().is_empty()).enumerate() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let idx = v["target"]["candidate_index"].as_u64().unwrap();
        let count = v["target"]["candidate_count"].as_u64().unwrap();
        let pick = if i < hits { idx } else { (idx + 1) % count };
        out.push_str(&serde_json::json!({ "record_id": v["id"], "selected_index": pick }).to_string());
        out.push('\n');
    }
    std::fs::write(dest, out).unwrap();
}

pub fn sentences(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["sentence"].as_str().unwrap().to_string())
        .collect()
}
