#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// A scratch directory holding copies of the bundled Pima script and data.
pub fn pima_tree() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for f in ["pima.rvl", "pima.csv"] {
        fs::copy(data_dir().join(f), dir.path().join(f)).unwrap();
    }
    dir
}

/// Runs the `rv` binary in `dir` with `RV_ROOT` pointing there.
pub fn rv(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rv"))
        .args(args)
        .current_dir(dir)
        .env("RV_ROOT", dir)
        .output()
        .expect("rv binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Runs and insists on success, returning stdout.
pub fn rv_ok(dir: &Path, args: &[&str]) -> String {
    let o = rv(dir, args);
    assert!(o.status.success(), "rv {args:?} failed: {}", stderr(&o));
    stdout(&o)
}
