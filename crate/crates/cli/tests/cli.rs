use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hadwiger(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hadwiger"))
        .args(args)
        .env_remove("HADWIGER_ORACLE_CAP")
        .env_remove("HADWIGER_ORACLE_BUDGET")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn construct(dir: &Path, name: &str, params: [&str; 4]) -> std::path::PathBuf {
    let file = dir.join(name);
    let [g, p, k, a] = params;
    let out = hadwiger(&["construct", "--g", g, "--p", p, "--k", k, "--a", a, "-o", path(&file)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    file
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cert = construct(dir.path(), "c.json", ["1", "1", "2", "1"]);
    let report_file = dir.path().join("report.json");
    let out = hadwiger(&["verify", path(&cert), "--report", path(&report_file)]);
    assert_eq!(code(&out), 0);
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["ok"], true);
    assert_eq!(report["n"], 7);
    assert_eq!(fs::read_to_string(&report_file).unwrap(), stdout(&out));
}

#[test]
fn planar_single_vortex_gives_k2() {
    let dir = tempfile::tempdir().unwrap();
    let cert = construct(dir.path(), "c.json", ["0", "1", "2", "0"]);
    let doc: Value = serde_json::from_str(&fs::read_to_string(cert).unwrap()).unwrap();
    assert_eq!(doc["n"], 2);
}

#[test]
fn tampered_certificate_fails_with_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let cert = construct(dir.path(), "c.json", ["2", "1", "2", "0"]);
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    let set = doc["model"]["sets"]["0"].as_array_mut().expect("branch sets keyed by index");
    set.clear();
    fs::write(&cert, doc.to_string()).unwrap();
    let out = hadwiger(&["verify", path(&cert)]);
    assert_eq!(code(&out), 1);
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["ok"], false);
    assert!(stdout(&out).contains("empty_set"), "{}", stdout(&out));
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&hadwiger(&["verify", path(&bad)])), 2);
    assert_eq!(code(&hadwiger(&["eta", path(&bad)])), 2);
    assert_eq!(code(&hadwiger(&["verify", path(&dir.path().join("missing.json"))])), 2);
    assert_eq!(code(&hadwiger(&["construct", "--g", "1"])), 2);
}

#[test]
fn parameter_failures_have_distinct_codes() {
    // first genus whose one-vortex construction needs a complete graph outside the catalog
    assert_eq!(code(&hadwiger(&["construct", "--g", "7", "--p", "1", "--k", "2"])), 3);
    assert_eq!(code(&hadwiger(&["construct", "--g", "3", "--p", "1", "--k", "1"])), 2);
    assert_eq!(code(&hadwiger(&["construct", "--g", "0", "--p", "0", "--k", "2"])), 2);
}

#[test]
fn eta_of_named_graphs() {
    let dir = tempfile::tempdir().unwrap();
    for (spec, want) in [("complete:5", "5"), ("petersen", "5"), ("grid:3", "4"), ("cycle:5", "3")] {
        let file = dir.path().join("g.json");
        assert_eq!(code(&hadwiger(&["export", "--graph", spec, "-o", path(&file)])), 0);
        let witness = dir.path().join("w.json");
        let out = hadwiger(&["eta", path(&file), "--witness", path(&witness)]);
        assert_eq!(code(&out), 0, "{spec}");
        assert_eq!(stdout(&out).trim(), want, "{spec}");
        let model: Value = serde_json::from_str(&fs::read_to_string(witness).unwrap()).unwrap();
        assert_eq!(model["pattern_n"].to_string(), want);
        assert_eq!(model["sets"].as_object().unwrap().len().to_string(), want);
    }
}

#[test]
fn oracle_cap_gives_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c20.json");
    assert_eq!(code(&hadwiger(&["export", "--graph", "cycle:20", "-o", path(&file)])), 0);
    assert_eq!(code(&hadwiger(&["eta", path(&file)])), 4);
    let raised = hadwiger(&["--oracle-cap", "20", "eta", path(&file)]);
    assert_eq!(code(&raised), 0);
    assert_eq!(stdout(&raised).trim(), "3");
    assert_eq!(code(&hadwiger(&["--oracle-budget", "1", "eta", path(&file), "--oracle-cap", "20"])), 4);
}

#[test]
fn bounds_table() {
    let out = stdout(&hadwiger(&["bounds", "--g", "0", "--p", "1", "--k", "2", "--json"]));
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["bounds"]["main_upper"]["exact"], "149");
    assert_eq!(doc["bounds"]["lemma21_bound"], Value::Null);

    let text = stdout(&hadwiger(&["bounds", "--g", "2", "--p", "1", "--k", "2"]));
    assert!(text.contains("4 + √12"), "{text}");

    let doc: Value = serde_json::from_str(&stdout(&hadwiger(&[
        "bounds", "--g", "1", "--p", "1", "--k", "2", "--a", "3", "--tw", "3", "--json",
    ])))
    .unwrap();
    assert_eq!(doc["bounds"]["lower_guarantee"]["exact"], "3 + 1/2·√2");
    assert_eq!(doc["bounds"]["lemma21_bound"]["exact"], "7");
}

#[test]
fn construction_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = construct(dir.path(), "a.json", ["2", "2", "3", "1"]);
    let b = construct(dir.path(), "b.json", ["2", "2", "3", "1"]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let ra = stdout(&hadwiger(&["verify", path(&a)]));
    let rb = stdout(&hadwiger(&["verify", path(&b)]));
    assert_eq!(ra, rb);
}

#[test]
fn dot_export() {
    let dir = tempfile::tempdir().unwrap();
    let cert = construct(dir.path(), "c.json", ["0", "1", "2", "1"]);
    let out = stdout(&hadwiger(&["export", "--cert", path(&cert), "--format", "dot"]));
    assert!(out.starts_with("graph G {"), "{out}");
    assert!(out.contains("--"));
    assert_eq!(code(&hadwiger(&["export"])), 2);
}
