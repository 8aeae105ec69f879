#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    pub fn json(&self) -> Value {
        // With `--format json` stdout holds exactly one document.
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", self.stdout))
    }
}

pub fn qwalk(args: &[&str]) -> Run {
    let out: Output = Command::new(env!("CARGO_BIN_EXE_qwalk")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn config_path(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(name).display().to_string()
}

/// `(position_index, probability)` rows of a distribution CSV.
pub fn csv_distribution(text: &str) -> Vec<(i64, f64)> {
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("position_index,physical_position_m,probability"));
    lines
        .take_while(|l| !l.is_empty())
        .map(|l| {
            let cols: Vec<&str> = l.split(',').collect();
            (cols[0].parse().unwrap(), cols[2].parse().unwrap())
        })
        .collect()
}

pub fn sorted_keys(v: &Value) -> Vec<String> {
    v.as_object().expect("object").keys().cloned().collect()
}

pub fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}
