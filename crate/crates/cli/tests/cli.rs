use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn means(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_means")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn value(o: &Output) -> f64 {
    stdout_json(o)["value"].as_f64().unwrap()
}

fn write(dir: &Path, name: &str, dim: usize, data: &[f64]) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::json!({ "dim": dim, "data": data }).to_string()).unwrap();
    p.display().to_string()
}

fn data(v: &Value) -> Vec<f64> {
    v["data"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn scalar_examples() {
    let o = means(&["scalar", "--kind", "log", "--t", "0.2169", "706", "31.8"]);
    assert_eq!(code(&o), 0);
    let v: f64 = String::from_utf8_lossy(&o.stdout).trim().parse().unwrap();
    assert!((v - 431.8506).abs() < 5e-4);

    let o = means(&["--json", "scalar", "--kind", "arith", "--t", "0.5", "1", "3"]);
    assert_eq!(value(&o), 2.0);
    assert_eq!(stdout_json(&o)["kind"], "arithmetic");
    let o = means(&["--json", "scalar", "--kind", "stolarsky", "--r", "2", "1", "3"]);
    assert!((value(&o) - 2.0).abs() < 1e-15);
    let o = means(&["--json", "scalar", "--kind", "stolarsky", "--r", "-1", "1", "4"]);
    assert!((value(&o) - 2.0).abs() < 1e-15);
}

#[test]
fn fraction_weights() {
    let a = value(&means(&["--json", "scalar", "--kind", "geo", "--t", "1/3", "1", "8"]));
    let b = value(&means(&["--json", "scalar", "--kind", "geo", "--t", "0.3333333333333333", "1", "8"]));
    assert!((a - 2.0).abs() < 1e-15);
    assert!((a - b).abs() < 1e-14);
}

#[test]
fn bad_input_exits_2() {
    for args in [
        &["scalar", "--kind", "log", "--t", "1.5", "1", "2"][..],
        &["scalar", "--kind", "log", "--t", "0.5", "-1", "2"],
        &["scalar", "--kind", "nope", "1", "2"],
        &["scalar", "--kind", "log", "--t", "1/0", "1", "2"],
        &["verify", "nope"],
        &["verify", "chain", "--trials", "0"],
        &["verify", "monotone", "--fn", "nope"],
        &["search", "heronian", "--iters", "0"],
        &["frobnicate"],
    ] {
        assert_eq!(code(&means(args)), 2, "{args:?}");
    }
}

#[test]
fn json_errors_on_stderr() {
    for args in [
        &["--json", "search", "heronian", "--iters", "0"][..],
        &["--json", "scalar", "--kind", "log", "--t", "2", "1", "2"],
        &["--json", "frobnicate"],
    ] {
        let o = means(args);
        assert_eq!(code(&o), 2);
        assert!(o.stdout.is_empty());
        let e: Value = serde_json::from_slice(&o.stderr).unwrap();
        assert!(e["error"].is_string(), "{args:?}");
    }
}

#[test]
fn matrix_files() {
    let dir = tempfile::tempdir().unwrap();
    let id = write(dir.path(), "i.json", 2, &[1.0, 0.0, 0.0, 1.0]);
    let d = write(dir.path(), "d.json", 2, &[4.0, 0.0, 0.0, 9.0]);
    let o = means(&["matrix", "--kind", "geo", "--t", "0.5", &id, &d]);
    assert_eq!(code(&o), 0);
    let g = data(&stdout_json(&o));
    for (x, y) in g.iter().zip([2.0, 0.0, 0.0, 3.0]) {
        assert!((x - y).abs() < 1e-14);
    }

    let a = write(dir.path(), "a.json", 2, &[3.0, 1.0, 1.0, 2.0]);
    let o = means(&["matrix", "--kind", "log", "--t", "0.3", &a, &a]);
    for (x, y) in data(&stdout_json(&o)).iter().zip([3.0, 1.0, 1.0, 2.0]) {
        assert!((x - y).abs() < 1e-13);
    }

    let p = write(dir.path(), "p.json", 3, &[0.7, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 50.0]);
    let q = write(dir.path(), "q.json", 3, &[19.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.01]);
    let o = means(&["matrix", "--kind", "identric", "--t", "1/4", &p, &q]);
    let m = data(&stdout_json(&o));
    for (i, (x, y)) in [(0.7, 19.0), (2.0, 2.0), (50.0, 0.01)].into_iter().enumerate() {
        let s =
            value(&means(&["--json", "scalar", "--kind", "identric", "--t", "0.25", &x.to_string(), &y.to_string()]));
        assert!((m[4 * i] - s).abs() <= 1e-12 * s.max(1.0), "{} vs {s}", m[4 * i]);
    }

    // output re-parses as input
    let out = dir.path().join("out.json");
    let o = means(&["--json", "matrix", "--kind", "logarithmic", "--t", "0.6", &a, &d, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let again = means(&["matrix", "--kind", "arith", "--t", "0", out.to_str().unwrap(), &a]);
    assert_eq!(code(&again), 0);
    let first: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(data(&stdout_json(&again)), data(&first));
}

#[test]
fn matrix_errors() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", 2, &[1.0, 0.0, 0.0, 1.0]);
    let asym = write(dir.path(), "s.json", 2, &[1.0, 0.5, 0.0, 1.0]);
    let indef = write(dir.path(), "n.json", 2, &[1.0, 2.0, 2.0, 1.0]);
    let wrong = write(dir.path(), "w.json", 3, &[1.0, 0.0]);
    let three = write(dir.path(), "3.json", 1, &[1.0]);
    let junk = dir.path().join("j.json");
    std::fs::write(&junk, "{\"dim\": 2,\n \"data\": [1, 0, 0 1]}").unwrap();
    for b in [asym, indef, wrong, three, junk.display().to_string(), "/nonexistent/x.json".into()] {
        let o = means(&["matrix", "--kind", "geo", &a, &b]);
        assert_eq!(code(&o), 2, "{b}");
        assert!(!o.stderr.is_empty());
    }
    let o = means(&["matrix", "--kind", "geo", &a, &junk.display().to_string()]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn verify_exit_codes() {
    let o = means(&["--json", "verify", "chain", "--dims", "2,3", "--trials", "20", "--seed", "7"]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    assert_eq!(r["report"]["pass"], true);
    assert!(r["meta"]["elapsed_ms"].is_number());

    let o = means(&["verify", "monotone", "--fn", "x2", "--order", "2"]);
    assert_eq!(code(&o), 1);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("loewner matrix"), "{text}");

    let third = "0.3333333333333333";
    let o = means(&["verify", "invariance", "--p", "0.5", "--q", third, "--r", "0.6666666666666666", "--trials", "50"]);
    assert_eq!(code(&o), 0);
    let o = means(&["--json", "verify", "invariance", "--p", "1/2", "--q", "1/3", "--r", "1/3", "--trials", "50"]);
    assert_eq!(code(&o), 1);
    let r = stdout_json(&o);
    let w = r["report"]["properties"].as_array().unwrap().iter().find(|p| p["name"] == "invariance_witness").unwrap();
    assert!(w["worst"].as_f64().unwrap() >= 1e-4);
}

#[test]
fn config_file_and_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"seed": 3, "dims": [2], "trials": 4, "json": true}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let o = means(&["--config", c, "verify", "chain"]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    assert_eq!(r["report"]["config"]["seed"], 3);
    assert_eq!(r["report"]["config"]["trials"], 4);
    let o = means(&["--config", c, "--seed", "9", "verify", "chain", "--trials", "2"]);
    let r = stdout_json(&o);
    assert_eq!(r["report"]["config"]["seed"], 9);
    assert_eq!(r["report"]["config"]["trials"], 2);

    std::fs::write(&cfg, r#"{"seeed": 3}"#).unwrap();
    assert_eq!(code(&means(&["--config", c, "verify", "chain"])), 2);
}

#[test]
fn search_is_reproducible() {
    let a = means(&["--json", "--seed", "5", "search", "heronian", "--iters", "200"]);
    let b = means(&["--json", "--seed", "5", "search", "heronian", "--iters", "200"]);
    assert_eq!(code(&a), 0);
    let (ra, rb) = (stdout_json(&a), stdout_json(&b));
    assert_eq!(ra["report"], rb["report"]);
    let gap = ra["report"]["probe"]["gap"].as_f64().unwrap();
    assert!((gap - 5.0004).abs() < 1e-3);
    assert!(ra["report"]["found"].as_u64().unwrap() > 0);
}
