//! The `hitchinlab` binary end to end.

use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hitchinlab"))
        .args(args)
        .env_remove("HITCHINLAB_PRECISION")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn garnier_check_n4() {
    let out = run(&["garnier", "check", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["schema"], 1);
    let pairs = v["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 6);
    assert!(pairs.iter().all(|p| p["zero"] == true));
}

#[test]
fn classify_p1_trivial_case() {
    let out = run(&["classify-p1", "--m", "2", "--coeffs", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["k"], 2);
}

#[test]
fn usage_errors() {
    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(run(&["garnier", "check"]).status.code(), Some(2));
    assert_eq!(run(&["gaudin", "check", "--dims", "2,x", "--points", "0,1"]).status.code(), Some(2));
    assert_eq!(run(&["cm", "flow", "--data", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn identical_inputs_give_identical_bytes() {
    for args in [
        &["gaudin", "spectrum", "--dims", "2,2,3", "--points", "0,1/2,3"][..],
        &["cm", "verify", "--samples", "20", "--seed", "4"][..],
        &["--sampled", "garnier", "check", "--n", "6", "--samples", "4"][..],
        &["--threads", "3", "garnier", "check", "--n", "5"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let one = run(&["--threads", "1", "garnier", "check", "--n", "5"]);
    let many = run(&["--threads", "4", "garnier", "check", "--n", "5"]);
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn flows_write_csv_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let state = write(
        dir.path(),
        "state.json",
        r#"{"t": [0, 1, 3, 6], "y": [-2, 1, "-8/3", -1], "p": ["-2/5", "-2/55", "54/275", "6/25"]}"#,
    );
    let csv = dir.path().join("garnier.csv");
    let out = run(&["garnier", "flow", "--data", &state, "--h", "4", "--t-end", "0.2", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["flow"]["steps"], 200);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 202);
    assert!(text.starts_with("t,y1,y2,y3,y4,p1,"));

    let spectral = report(&run(&["garnier", "spectral", "--data", &state]));
    assert_eq!(spectral["genus"], 1);
    assert_eq!(spectral["deg_a"], 0);
    assert_eq!(spectral["deg_b"], 4);

    // A tolerance no flow can meet turns the report into a failure.
    let out = run(&["garnier", "flow", "--data", &state, "--t-end", "0.1", "--h", "4", "--drift-tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["pass"], false);

    let cm = write(
        dir.path(),
        "cm.json",
        r#"{"tau": [0, 1], "c": [0, 0.2], "q": [[0.1, 0], [0.57, 0]], "p": [[0.13, 0], [-0.08, 0]]}"#,
    );
    let csv = dir.path().join("cm.csv");
    let out = run(&["cm", "flow", "--data", &cm, "--t-end", "0.1", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["pass"], true);
    assert!(v["report"]["drift"][1].as_f64().unwrap() < 1e-6);
    assert!(std::fs::read_to_string(&csv).unwrap().starts_with("t,q1_re,q1_im,q2_re"));
}

#[test]
fn oper_commands() {
    let out = run(&["oper", "schwarzian", "--series", "0,1,1", "--order", "6"]);
    assert_eq!(report(&out)["coeffs"][0], "-6");
    let dir = tempfile::tempdir().unwrap();
    let u = write(dir.path(), "u.json", "[1, -2, 0, 3]");
    let s = write(dir.path(), "s.json", r#"{"coeffs": [0, 2, 1, -1], "order": 10}"#);
    let out = run(&["oper", "transform", "--u", &u, "--s", &s]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["transport_residual_zero"], true);
    assert_eq!(v["coeffs"][0], "13/16");
    let shifted = write(dir.path(), "shift.json", "[1, 1]");
    assert_eq!(run(&["oper", "transform", "--u", &u, "--s", &shifted]).status.code(), Some(2));
}

#[test]
fn dims_and_config() {
    let out = run(&["dims", "--group", "SL", "--n", "3", "--genus", "2"]);
    let v = report(&out);
    assert_eq!(v["degrees"], serde_json::json!([2, 3]));
    assert_eq!(v["bun_dim"], v["base_dim"]);

    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.toml", "series_order = 6\n");
    let out = run(&["--config", &cfg, "oper", "schwarzian", "--series", "0,1,1"]);
    assert_eq!(report(&out)["order"], 3);
    let bad = write(dir.path(), "bad.toml", "series_order = 2\n");
    assert_eq!(run(&["--config", &bad, "dims", "--group", "GL", "--n", "2", "--genus", "2"]).status.code(), Some(2));

    let target = dir.path().join("report.json");
    let out = run(&["--out", target.to_str().unwrap(), "dims", "--group", "GL", "--n", "2", "--genus", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(v["bun_dim"], 9);

    let tight = Command::new(env!("CARGO_BIN_EXE_hitchinlab"))
        .args(["cm", "verify", "--samples", "10"])
        .env("HITCHINLAB_PRECISION", "1e-30")
        .output()
        .unwrap();
    assert_eq!(tight.status.code(), Some(1));
    assert_eq!(report(&tight)["tol"].as_f64(), Some(1e-30));
}

#[test]
fn verify_all_quick() {
    let out = run(&["verify-all", "--quick"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = report(&out);
    let names: Vec<&str> = v["suites"].as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    assert_eq!(names.len(), 10);
    assert_eq!(names[0], "exactalg");
}
