use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quatinv")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn poincare_both_methods_agree() {
    let out = run(&["poincare", "--K", "D2", "--H", "C2", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["match"], true);
    assert_eq!(v["coeffs"], serde_json::json!([1, 2, 2, 1]));
    assert_eq!(v["degrees"], serde_json::json!([0, 3, 6, 9]));
    assert!(v.get("seconds").is_none());
}

#[test]
fn poincare_closed_only() {
    let v = json(&run(&["poincare", "--K", "C4", "--H", "C2", "--n", "2", "--method", "closed"]));
    assert_eq!(v["coeffs"], serde_json::json!([1, 3, 2]));
}

#[test]
fn rank_one_orbits_for_noncyclic_quotient() {
    let out = run(&["orbits", "--K", "D4", "--H", "C4a", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["rank1Orbits"], 5);
}

#[test]
fn size_guard_exits_with_2() {
    let out = run(&["poincare", "--K", "D4", "--H", "D4", "--n", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("size guard"));
}

#[test]
fn unknown_subgroup_token() {
    let out = run(&["poincare", "--K", "D2", "--H", "Zz", "--n", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("C4a"));
}

#[test]
fn csv_table() {
    let out = run(&["--csv", "poincare", "--K", "D2", "--H", "C2", "--n", "2"]);
    let mut rdr = csv::Reader::from_reader(&out.stdout[..]);
    let rows: Vec<Vec<String>> =
        rdr.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
    assert_eq!(rdr.headers().unwrap(), vec!["k", "degree", "coefficient"]);
    assert_eq!(rows, vec![vec!["0", "0", "1"], vec!["1", "3", "5"], vec!["2", "6", "4"]]);
}

#[test]
fn verify_suites_pass() {
    for suite in ["dim2", "engine"] {
        let out = run(&["verify", "--suite", suite]);
        assert_eq!(out.status.code(), Some(0), "{suite}");
        let v = json(&out);
        assert_eq!(v["failed"], 0);
        assert!(v["passed"].as_u64().unwrap() > 0);
    }
}

#[test]
fn primitive_without_data_is_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify", "--suite", "primitive", "--primitive-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let table = v["checks"].as_array().unwrap().iter().find(|c| c["id"] == "table3").unwrap();
    assert_eq!(table["status"], "skipped");
}

#[test]
fn export_then_primitive_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let p = path.to_str().unwrap();
    assert!(run(&["export", "--K", "D2", "--H", "C2", "--n", "2", "--output", p]).status.success());
    let out = run(&["primitive", "--input", p]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["order"], 32);
    assert_eq!(v["poincareOk"], true);
    assert_eq!(v["invariantDims"], serde_json::json!([1, 5, 4]));
}

#[test]
fn output_is_deterministic() {
    let args = ["orbits", "--K", "T", "--H", "D2", "--n", "3"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
