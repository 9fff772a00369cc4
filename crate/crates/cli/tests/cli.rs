use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bmst(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bmst"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn outputs(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str::<Value>(text.trim()).expect("stdout is JSON")["outputs"].clone()
}

fn read(dir: &Path, rel: &str) -> String {
    fs::read_to_string(dir.join(rel)).unwrap()
}

#[test]
fn solve_writes_tree_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = bmst(dir.path(), &["solve", "--d", "2", "--n", "1000", "--alpha", "0.5", "--p", "1", "--seed", "7", "--out", "a"]);
    assert_eq!(out.status.code(), Some(0));
    let paths = outputs(&out);
    assert_eq!(paths["tree"], "a/tree.csv");
    let tree = read(dir.path(), "a/tree.csv");
    assert!(tree.starts_with("u,v,length\n"));
    assert_eq!(tree.lines().count(), 1000);
    let summary: Value = serde_json::from_str(&read(dir.path(), "a/summary.json")).unwrap();
    for key in ["cost_p", "bottleneck", "max_degree", "n_r", "n_b", "d", "p", "metric", "seed"] {
        assert!(summary.get(key).is_some(), "{key}");
    }
    assert_eq!(summary["n_r"], 500);
    let cfg: Value = serde_json::from_str(&read(dir.path(), "a/effective_config.json")).unwrap();
    assert_eq!(cfg["seed"], 7);
    assert_eq!(cfg["command"], "solve");
}

#[test]
fn same_arguments_give_identical_bytes() {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for (dir, workers) in dirs.iter().zip(["1", "2"]) {
        let out = bmst(dir.path(), &["scan-degree", "--schedule", "64,128", "--trials", "3", "--seed", "5", "--workers", workers, "--out", "x"]);
        assert_eq!(out.status.code(), Some(0));
    }
    for file in ["x/records.csv", "x/summary.json"] {
        assert_eq!(read(dirs[0].path(), file), read(dirs[1].path(), file));
    }
    let records = read(dirs[0].path(), "x/records.csv");
    assert!(records.starts_with("# plan={"));
    assert!(records.lines().next().unwrap().contains("version="));
    assert_eq!(records.lines().count(), 2 + 6);
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = bmst(dir.path(), &["verify", "--all", "--n", "300", "--d", "2", "--seed", "3", "--out", "ok"]);
    assert_eq!(ok.status.code(), Some(0));
    let lines = read(dir.path(), "ok/reports.jsonl");
    assert_eq!(lines.lines().count(), 8);
    for line in lines.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_ne!(v["status"], "fail");
    }
    let bad = bmst(dir.path(), &["verify", "--all", "--n", "300", "--d", "2", "--seed", "3", "--corrupt", "long_edge_swap", "--out", "bad"]);
    assert_eq!(bad.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&bad.stderr);
    assert!(stderr.contains("\"witness\":{"), "{stderr}");
}

#[test]
fn verify_check_filter() {
    let dir = tempfile::tempdir().unwrap();
    let out = bmst(dir.path(), &["verify", "--n", "100", "--check", "cut_property,bottleneck", "--format", "json", "--out", "f"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&read(dir.path(), "f/reports.json")).unwrap();
    let ids: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["lemma"].as_str().unwrap()).collect();
    assert_eq!(ids, ["cut_property", "bottleneck"]);
}

#[test]
fn usage_and_regime_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(bmst(dir.path(), &["solve", "--bogus"]).status.code(), Some(2));
    assert_eq!(bmst(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(bmst(dir.path(), &["beta-series", "--d", "1", "--p", "1"]).status.code(), Some(2));
    assert_eq!(bmst(dir.path(), &["scan-scaling", "--d", "2", "--p", "2", "--schedule", "64,128"]).status.code(), Some(2));
    assert_eq!(bmst(dir.path(), &["tail-check", "--t", "1"]).status.code(), Some(2));
    assert_eq!(bmst(dir.path(), &["solve", "--workers", "0"]).status.code(), Some(2));
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.json"), r#"{"n": 40, "seed": 11, "alpha": 0.25}"#).unwrap();
    let out = bmst(dir.path(), &["solve", "--config", "c.json", "--seed", "12", "--out", "c"]);
    assert_eq!(out.status.code(), Some(0));
    let cfg: Value = serde_json::from_str(&read(dir.path(), "c/effective_config.json")).unwrap();
    assert_eq!(cfg["n"], 40);
    assert_eq!(cfg["alpha"], 0.25);
    assert_eq!(cfg["seed"], 12);
    let summary: Value = serde_json::from_str(&read(dir.path(), "c/summary.json")).unwrap();
    assert_eq!(summary["n_r"], 10);
}

#[test]
fn gen_then_solve_from_file() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(bmst(dir.path(), &["gen", "--n", "30", "--d", "3", "--metric", "torus", "--seed", "2", "--out", "g"]).status.code(), Some(0));
    let inst = read(dir.path(), "g/instance.csv");
    assert!(inst.starts_with("color,x0,x1,x2\n"));
    let meta: Value = serde_json::from_str(&read(dir.path(), "g/instance.meta.json")).unwrap();
    assert_eq!(meta["metric"], "flat_torus");
    let from_file = bmst(dir.path(), &["solve", "--input", "g/instance.csv", "--out", "s1"]);
    let direct = bmst(dir.path(), &["solve", "--n", "30", "--d", "3", "--metric", "torus", "--seed", "2", "--out", "s2"]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(direct.status.code(), Some(0));
    assert_eq!(read(dir.path(), "s1/tree.csv"), read(dir.path(), "s2/tree.csv"));
    assert_eq!(read(dir.path(), "s1/summary.json"), read(dir.path(), "s2/summary.json"));
}

#[test]
fn json_format_wraps_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = bmst(dir.path(), &["beta-series", "--kmax", "3", "--samples", "2000", "--format", "json", "--out", "b"]);
    assert_eq!(out.status.code(), Some(0));
    let terms: Value = serde_json::from_str(&read(dir.path(), "b/terms.json")).unwrap();
    let first = &terms.as_array().unwrap()[0];
    for key in ["k_R", "k_B", "E", "stderr", "acceptance", "samples"] {
        assert!(first.get(key).is_some(), "{key}");
    }
    let est: Value = serde_json::from_str(&read(dir.path(), "b/beta.json")).unwrap();
    assert!(est["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn term_table_csv_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = bmst(dir.path(), &["beta-series", "--d", "1", "--p", "0.5", "--alpha", "0.5", "--kmax", "2", "--samples", "1000", "--out", "t"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(read(dir.path(), "t/terms.csv").starts_with("k_R,k_B,E,stderr,acceptance,samples\n"));
}

#[test]
fn remaining_subcommands_run() {
    let dir = tempfile::tempdir().unwrap();
    let runs: &[&[&str]] = &[
        &["beta-direct", "--schedule", "64,128,256", "--trials", "4", "--out", "bd"],
        &["scan-scaling", "--schedule", "64,128", "--trials", "2", "--out", "ss"],
        &["scan-concentration", "--schedule", "64,128", "--trials", "3", "--out", "sc"],
        &["scan-rates", "--schedule", "64,128", "--trials", "2", "--out", "sr"],
        &["calibrate-frieze", "--n", "20", "--trials", "10", "--out", "fr"],
        &["tail-check", "--n", "1000", "--level", "3", "--trials", "50", "--out", "tc"],
    ];
    for args in runs {
        let out = bmst(dir.path(), args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let paths = outputs(&out);
        for (_, p) in paths.as_object().unwrap() {
            assert!(dir.path().join(p.as_str().unwrap()).exists());
        }
    }
    let direct: Value = serde_json::from_str(&read(dir.path(), "bd/direct.json")).unwrap();
    assert!(direct.get("records").is_none());
    assert!(direct["value"].as_f64().unwrap() > 0.0);
    let frieze: Value = serde_json::from_str(&read(dir.path(), "fr/frieze.json")).unwrap();
    assert!(frieze.get("zeta3").is_some());
}
