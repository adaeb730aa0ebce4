use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const REGULAR: &str = r#"{"c": 1, "r": 2, "A": [["0"]], "B": [["0"]], "I": [["1", "0"]], "J": [["0"], ["1"]]}"#;
const NOT_SOLUTION: &str = r#"{"c": 1, "r": 2, "A": [["0"]], "B": [["0"]], "I": [["1", "0"]], "J": [["1"], ["0"]]}"#;
const ZERO: &str = r#"{"c": 1, "r": 1, "A": [["0"]], "B": [["0"]], "I": [["0"]], "J": [["0"]]}"#;

fn adhm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adhm"))
        .args(args)
        .env_remove("ADHM_SEED")
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = adhm(&full);
    let stdout = String::from_utf8(out.stdout).unwrap();
    (out.status.code().unwrap(), serde_json::from_str(&stdout).unwrap_or(Value::Null))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn check_regular_datum() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "x.json", REGULAR);
    let out = adhm(&["check", "--in", p(&f)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("solution: true"));
}

#[test]
fn check_non_solution_exits_one() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "x.json", NOT_SOLUTION);
    let (code, v) = json(&["check", "--in", p(&f)]);
    assert_eq!(code, 1);
    assert_eq!(v["solution"], Value::Bool(false));
}

#[test]
fn classify_zero_datum() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "x.json", ZERO);
    let (code, v) = json(&["classify", "--in", p(&f)]);
    assert_eq!(code, 0);
    assert_eq!(v["is_solution"], Value::Bool(true));
    for key in ["stable", "costable", "regular", "sj", "ts"] {
        assert_eq!(v[key], Value::Bool(false), "{key}");
    }
}

#[test]
fn classify_regular_datum() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "x.json", REGULAR);
    let (_, v) = json(&["classify", "--in", p(&f)]);
    for key in ["stable", "costable", "regular", "sj", "ts"] {
        assert_eq!(v[key], Value::Bool(true), "{key}");
    }
}

#[test]
fn audit_rows_agree() {
    let (code, v) = json(&["audit-dimensions", "--rmax", "3", "--cmax", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["all_agree"], Value::Bool(true));
    let rows = v["rows"].as_array().unwrap();
    // r in 1..=3, and (c, s) with s <= c <= 4 gives 15 pairs
    assert_eq!(rows.len(), 45);
}

#[test]
fn sample_round_trip() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().join("samples");
    let (code, v) = json(&[
        "sample", "--r", "2", "--c", "3", "--s", "2", "--seed", "11", "--count", "3", "--conjugate", "--out",
        p(&out_dir),
    ]);
    assert_eq!(code, 0);
    let files = v["files"].as_array().unwrap();
    assert_eq!(files.len(), 3);
    for f in files {
        let (code, c) = json(&["classify", "--in", f.as_str().unwrap()]);
        assert_eq!(code, 0);
        assert_eq!(c["is_solution"], Value::Bool(true));
        assert_eq!(c["sigma_dim"], Value::from(2));
    }
}

#[test]
fn sample_is_deterministic_and_env_seed_wins() {
    let args = ["sample", "--r", "1", "--c", "2", "--s", "1", "--seed", "5"];
    let a = adhm(&args).stdout;
    assert_eq!(a, adhm(&args).stdout);
    let b = Command::new(env!("CARGO_BIN_EXE_adhm"))
        .args(["sample", "--r", "1", "--c", "2", "--s", "1", "--seed", "6"])
        .env("ADHM_SEED", "5")
        .output()
        .unwrap()
        .stdout;
    assert_eq!(a, b);
}

#[test]
fn monad_queries() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "x.json", REGULAR);
    let (code, v) = json(&["monad", "--in", p(&f), "fiber", "--point", "1,-1,2"]);
    assert_eq!(code, 0);
    assert_eq!(v["h0_fiber"], Value::from(2));
    assert_eq!(v["alpha_injective"], Value::Bool(true));

    let (_, v) = json(&["monad", "--in", p(&f), "support"]);
    assert_eq!(v["singular_support_total_multiplicity"], Value::from(0));

    let (_, v) = json(&["monad", "--in", p(&f), "h0", "--n", "1"]);
    // regular: h0 equals the Euler characteristic 2*3 - 1
    assert_eq!(v["h0"], Value::from(5));
    assert_eq!(v["euler_characteristic"], Value::from(5));

    let (_, v) = json(&["monad", "--in", p(&f), "invariants"]);
    assert_eq!(v["charge"], Value::from(1));
    assert_eq!(v["length"], Value::from(0));
}

#[test]
fn uhlenbeck_writes_regular_part() {
    let dir = TempDir::new().unwrap();
    let samples = dir.path().join("s");
    let (code, _) = json(&["sample", "--r", "2", "--c", "3", "--s", "3", "--seed", "3", "--out", p(&samples)]);
    assert_eq!(code, 0);
    let reg = dir.path().join("reg.json");
    let (code, v) = json(&["uhlenbeck", "--in", p(&samples.join("sample-000.json")), "--out", p(&reg)]);
    assert_eq!(code, 0);
    let cloud = v["cloud_size"].as_u64().unwrap();
    assert_eq!(v["cloud_total_multiplicity"].as_u64().unwrap(), cloud);
    let (_, c) = json(&["classify", "--in", p(&reg)]);
    assert_eq!(c["regular"], Value::Bool(true));
}

#[test]
fn uhlenbeck_rejects_unstable() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "x.json", ZERO);
    assert_eq!(adhm(&["uhlenbeck", "--in", p(&f)]).status.code(), Some(2));
}

#[test]
fn remark_experiment_reports_both_families() {
    let (code, v) = json(&["remark-experiment"]);
    assert_eq!(code, 0);
    assert_eq!(v["first-family.sj"], Value::Bool(true));
    assert_eq!(v["first-family.jacobian_rank"], Value::from(4));
    assert_eq!(v["second-family.jacobian_rank"], Value::from(3));
}

#[test]
fn quick_sweep_passes() {
    let (code, v) = json(&["sweep", "--quick", "--seed", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["all_passed"], Value::Bool(true));
}

#[test]
fn usage_and_input_errors_exit_two() {
    assert_eq!(adhm(&["check", "--bogus"]).status.code(), Some(2));
    assert_eq!(adhm(&["check", "--in", "/nonexistent/file.json"]).status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.json", r#"{"c": 1, "r": 1, "A": [["x"]]}"#);
    let out = adhm(&["check", "--in", p(&f)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let g = write(&dir, "x.json", REGULAR);
    assert_eq!(adhm(&["monad", "--in", p(&g), "fiber", "--point", "0,0,0"]).status.code(), Some(2));
}
