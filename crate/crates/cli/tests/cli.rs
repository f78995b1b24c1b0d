use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn jspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jspec"))
        .args(args)
        .env("JSPEC_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const SHIFT: &str = r#"{"space":{"kind":"l2"},"operators":[{"kind":"shift","direction":"forward","prefix":[],"tail":1}]}"#;

const JORDAN_AND_SCALAR: &str = r#"{"space":{"kind":"finite","dim":2},"operators":[
  {"kind":"dense","entries":[[[0.5,0],[1,0]],[[0,0],[0.5,0]]]},
  {"kind":"dense","entries":[[[2,0],[0,0]],[[0,0],[2,0]]]}]}"#;

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn verify_passes_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let out = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    let (a, b) = (out("a.json"), out("b.json"));
    for p in [&a, &b] {
        let o = jspec(&["verify", "--check", "kunneth", "--trials", "12", "--seed", "7", "--stable", "--out", p]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (ra, rb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ra, rb);
    let r: Value = serde_json::from_slice(&ra).unwrap();
    assert_eq!(r["check"], "kunneth");
    assert_eq!(r["seed"], 7);
    assert_eq!(r["instances"].as_array().unwrap().len(), 12);
    assert!(r["config"].is_object());
    assert!(r["timing_ms"].is_u64());
}

#[test]
fn mutation_fails_with_a_counterexample() {
    let o = jspec(&["verify", "--check", "tensor-spectra", "--trials", "6", "--seed", "3", "--mutate", "flip-entry"]);
    assert_eq!(o.status.code(), Some(1));
    let r = json_out(&o);
    let failed: Vec<&Value> = r["instances"].as_array().unwrap().iter().filter(|i| i["pass"] == false).collect();
    assert!(!failed.is_empty());
    for i in failed {
        assert!(!i["counterexamples"].as_array().unwrap().is_empty());
    }
}

#[test]
fn invalid_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"space":{"kind":"finite","dim":2},"operators":[]}"#);
    let cases: Vec<Vec<&str>> = vec![
        vec!["verify", "--check", "no-such-check"],
        vec!["verify", "--trials", "0", "--check", "mapping"],
        vec!["classify", "--input", &bad, "--point", "0,0"],
        vec!["classify", "--input", "/nonexistent.json", "--point", "0,0"],
        vec!["region", "--input", &bad, "--grid", "1:0:3"],
        vec!["verify", "--check", "mapping", "--exact", "--float"],
        vec!["frobnicate"],
    ];
    for args in cases {
        assert_eq!(jspec(&args).status.code(), Some(2), "{args:?}");
    }
    let o = Command::new(env!("CARGO_BIN_EXE_jspec"))
        .args(["verify", "--check", "mapping", "--trials", "1"])
        .env("JSPEC_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn region_csv_for_the_shift() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "shift.json", SHIFT);
    let o = jspec(&["region", "--input", &f, "--kind", "browder-lower", "--grid", "-1.5:1.5:61", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re0,im0,browder-lower"));
    let mut n = 0;
    for l in lines {
        let v: Vec<&str> = l.split(',').collect();
        let (x, y): (f64, f64) = (v[0].parse().unwrap(), v[1].parse().unwrap());
        // Closed unit disk; no sample sits on the circle.
        assert_eq!(v[2] == "1", x.hypot(y) <= 1.0, "{l}");
        n += 1;
    }
    assert_eq!(n, 61 * 61);
}

#[test]
fn classify_finite_point() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "tuple.json", JORDAN_AND_SCALAR);
    let o = jspec(&["classify", "--input", &f, "--point", "0.5,0;2,0"]);
    assert_eq!(o.status.code(), Some(0));
    let c = json_out(&o);
    assert_eq!(c["spectra"]["defect"], true);
    assert_eq!(c["spectra"]["approx-point"], true);
    assert_eq!(c["spectra"]["browder-lower"], false);
    let o = jspec(&["classify", "--input", &f, "--point", "1,0;2,0", "--float"]);
    assert_eq!(json_out(&o)["spectra"]["defect"], false);
}

#[test]
fn koszul_homology() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "tuple.json", JORDAN_AND_SCALAR);
    let o = jspec(&["koszul", "--input", &f, "--point", "0.5,0;2,0"]);
    assert_eq!(o.status.code(), Some(0));
    let k = json_out(&o);
    assert_eq!(k["chain_dims"], serde_json::json!([2, 4, 2]));
    assert_eq!(k["homology"], serde_json::json!([1, 2, 1]));
    assert_eq!(k["euler"], 0);
    let s = write(dir.path(), "shift.json", SHIFT);
    assert_eq!(jspec(&["koszul", "--input", &s, "--point", "0,0"]).status.code(), Some(2));
}

#[test]
fn explicit_pair_input() {
    let dir = tempfile::tempdir().unwrap();
    let pair = format!(r#"{{"left": {JORDAN_AND_SCALAR}, "right": {JORDAN_AND_SCALAR}}}"#);
    let f = write(dir.path(), "pair.json", &pair);
    for check in ["kunneth", "tensor-spectra", "mult-spectra", "mult-browder"] {
        let o = jspec(&["verify", "--check", check, "--input", &f]);
        assert_eq!(o.status.code(), Some(0), "{check}: {}", String::from_utf8_lossy(&o.stderr));
    }
    // A pair file is not a single-tuple input.
    assert_eq!(jspec(&["verify", "--check", "projection", "--input", &f]).status.code(), Some(2));
}
