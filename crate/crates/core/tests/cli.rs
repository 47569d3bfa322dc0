use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pauli-susy")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn analyze_predictions() {
    let out = run(&["analyze", "--builtin", "free"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["N"], 4);
    let out = run(&["analyze", "--builtin", "solenoid"]);
    assert_eq!(json(&out)["N"], 2);
}

#[test]
fn bad_field_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"name": "bad", "A": ["x + * y", "0", "0"]}"#).unwrap();
    let out = run(&["analyze", "--field", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("offset 4"), "{err}");
}

#[test]
fn verify_free_and_wire() {
    let out = run(&["verify", "--builtin", "free", "--grid", "5,5,5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["N"], 4);
    assert_eq!(v["pass"], true);
    let out = run(&["verify", "--builtin", "wire", "--grid", "7,7,7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["N"], 3);
}

#[test]
fn tolerance_below_roundoff_exits_1() {
    let out = run(&["verify", "--builtin", "free", "--tol-algebra", "1e-18"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn spectrum_checks() {
    let out = run(&["spectrum", "--builtin", "free", "--grid", "5,5,5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["divisor"], 4);
    assert!(v["clusters"].as_array().unwrap().iter().all(|c| c["divisible"] == true));
    let out = run(&["spectrum", "--builtin", "free", "--grid", "4,4,4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["spectrum", "--builtin", "free", "--grid", "19"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"field": {"builtin": "solenoid"}, "grid": {"points": [5, 5, 5]}, "stages": ["analyze"]}"#)
        .unwrap();
    let out = run(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["analyze"]["N"], 2);
    assert!(v.get("verify").is_none());
    let out = run(&["run", "--config", cfg.to_str().unwrap(), "--builtin", "free"]);
    assert_eq!(json(&out)["analyze"]["N"], 4);
    std::fs::write(&cfg, r#"{"grid": {"pints": [5, 5, 5]}}"#).unwrap();
    assert_eq!(run(&["run", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn out_file_and_text_format() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["verify", "--builtin", "solenoid", "--grid", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["N"], 2);
    let out = run(&["verify", "--builtin", "solenoid", "--grid", "5", "--format", "text"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("certified N = 2"));
}

#[test]
fn catalog_and_params() {
    let out = run(&["catalog", "list"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 4);
    let out = run(&["analyze", "--builtin", "wire", "--param", "delta=0.05"]);
    assert_eq!(json(&out)["params"]["delta"], 0.05);
    let out = run(&["analyze", "--builtin", "wire", "--param", "bogus=1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dump_q0() {
    let out = run(&["dump", "q0", "--builtin", "free", "--grid", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("dim 54 nnz"));
}
