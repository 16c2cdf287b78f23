use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn hhbv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hhbv")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = hhbv(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn hh_column(v: &Value, key: &str) -> Vec<Value> {
    v["rows"].as_array().unwrap().iter().map(|r| r[key].clone()).collect()
}

#[test]
fn info_reports_symmetric_family_member() {
    let v = json(&["info", "--family", "dnr", "--n", "4", "--r", "1", "--format", "json"]);
    assert_eq!(v["dim"], 18);
    assert_eq!(v["symmetric"], true);
    assert_eq!(v["nakayama_order"], 1);
    let v = json(&["info", "--family", "truncated", "--n", "2", "--format", "json"]);
    assert_eq!(v["symmetric"], true);
}

#[test]
fn missing_input_exits_with_config_error() {
    let out = hhbv(&["info", "--input", "/nonexistent/algebra.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = hhbv(&["info"]);
    assert_eq!(out.status.code(), Some(2));
    let out = hhbv(&["info", "--family", "dnr", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ground_field_has_cohomology_only_in_degree_zero() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, r#"{{"field": "Q", "dim": 1, "basis": ["1"], "unit": [1], "mul": [[0, 0, 0, 1]]}}"#).unwrap();
    let path = file.path().to_str().unwrap();
    let v = json(&["hh", "--input", path, "--max-degree", "3", "--format", "json"]);
    assert_eq!(hh_column(&v, "hh"), vec![1, 0, 0, 0]);
    // no Frobenius form recorded, so no twisted column and no Δ
    assert!(hh_column(&v, "hh_nu_up").iter().all(Value::is_null));
    assert_eq!(hhbv(&["bv", "--input", path]).status.code(), Some(2));
}

#[test]
fn degree_zero_is_the_center() {
    let v = json(&["hh", "--family", "cycle", "--n", "3", "--max-degree", "0", "--format", "json"]);
    // center of the radical-square-zero 3-cycle is spanned by the unit
    assert_eq!(hh_column(&v, "hh"), vec![1]);
}

#[test]
fn hh_dims_agree_over_q_and_f3() {
    let args = |f| ["hh", "--family", "dnr", "--n", "4", "--r", "2", "--field", f, "--format", "json"];
    let q = json(&args("Q"));
    let f3 = json(&args("Fp:3"));
    assert_eq!(hh_column(&q, "hh"), hh_column(&f3, "hh"));
}

#[test]
fn budget_overflow_marks_rows_skipped() {
    let v = json(&["hh", "--family", "truncated", "--n", "3", "--max-degree", "4", "--budget", "100", "--format", "json"]);
    let hh = hh_column(&v, "hh");
    assert_eq!(hh[0], 1 + 2);
    assert_eq!(hh[4], "skipped");
}

#[test]
fn bv_of_eps1_is_the_unit_class() {
    let v = json(&["bv", "--family", "dnr", "--n", "4", "--r", "1", "--degree", "1", "--format", "json"]);
    let gens = v["generators"].as_array().unwrap();
    let eps = gens.iter().find(|g| g["generator"] == "eps1").expect("eps1 annotated");
    let one = gens.iter().find(|g| g["generator"] == "1").expect("unit annotated");
    assert_eq!(eps["delta"], one["class"]);
}

#[test]
fn bv_in_degree_zero_is_the_zero_map() {
    let v = json(&["bv", "--family", "truncated", "--n", "2", "--degree", "0", "--format", "json"]);
    assert_eq!(v["target_dim"], 0);
    assert_eq!(v["matrix"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_is_deterministic_and_passes_on_the_zoo() {
    let a = hhbv(&["verify", "--format", "json", "--samples", "10"]);
    let b = hhbv(&["verify", "--format", "json", "--samples", "10"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v["reports"].as_array().unwrap().iter().all(|r| r["seed"].is_u64()));
}

#[test]
fn verify_rejects_unknown_suites() {
    assert_eq!(hhbv(&["verify", "--suite", "twist-defect,nonsense"]).status.code(), Some(2));
}

#[test]
fn export_round_trips_through_input() {
    let out = hhbv(&["export", "--family", "cycle", "--n", "2", "--field", "Fp:3"]);
    assert!(out.status.success());
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(&out.stdout).unwrap();
    let path = file.path().to_str().unwrap();
    let loaded = json(&["hh", "--input", path, "--format", "json"]);
    let built = json(&["hh", "--family", "cycle", "--n", "2", "--field", "Fp:3", "--format", "json"]);
    assert_eq!(loaded["rows"], built["rows"]);
    let info = json(&["info", "--input", path, "--format", "json"]);
    assert_eq!(info["field"], "F3");
    assert_eq!(info["nakayama_order"], 2);
}
