use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_thickcurve"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}); stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

fn generate(dir: &Path, kind: &str, params: &[&str]) -> PathBuf {
    let path = dir.join(format!("{kind}.json"));
    let mut args = vec!["generate", kind, "-o", path.to_str().unwrap()];
    for p in params {
        args.extend(["-P", p]);
    }
    let out = run(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn thickness_of_circle() {
    let dir = TempDir::new().unwrap();
    let c = generate(dir.path(), "circle", &["n=1024"]);
    let out = run(&["thickness", c.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "thickness");
    assert_eq!(v["seed"], 0);
    assert!((num(&v["results"]["thickness"]) - 1.0).abs() < 1e-2);
    for key in ["tool_version", "inputs", "results", "witnesses", "tolerances"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn failing_constant_curvature_check_exits_2() {
    let dir = TempDir::new().unwrap();
    let c = generate(dir.path(), "rounded_square", &["n=1024"]);
    let out = run(&["check-thm3", c.to_str().unwrap(), "--tol", "0.02"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["results"]["status"], "NotRelativelyExtremal");
}

#[test]
fn stadium_passes_thickness_structure_check() {
    let dir = TempDir::new().unwrap();
    let c = generate(dir.path(), "stadium", &["n=1024"]);
    let out = run(&["check-thm2", c.to_str().unwrap(), "--tol", "0.02"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn straight_plan_is_one_segment() {
    let out = run(&["clc-plan", "--p", "0,0", "--q", "10,0", "--v", "1,0", "--w", "1,0", "--lambda", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((num(&v["results"]["best_length"]) - 10.0).abs() < 1e-12);
    let best = &v["results"]["candidates"][0];
    assert_eq!(num(&best["first"]["angle"]), 0.0);
    assert_eq!(num(&best["second"]["angle"]), 0.0);
}

#[test]
fn negative_coordinates_are_accepted() {
    let out = run(&["clc-plan", "--p", "-1,-2", "--q", "9,-2", "--v", "1,0", "--w", "1,0"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn malformed_document_exits_1_with_field_diagnostic() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"dim": 2, "closed": true, "points": [[0, 0], [1, 0, 5], [0, 1]]}"#).unwrap();
    let out = run(&["thickness", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("points") && err.contains("row 1"), "{err}");
}

#[test]
fn bad_arguments_exit_1() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["clc-plan", "--p", "0,x", "--q", "1,0", "--v", "1,0", "--w", "1,0"]).status.code(), Some(1));
    assert_eq!(run(&["generate", "pentagon"]).status.code(), Some(1));
}

#[test]
fn reports_are_byte_identical_across_runs_and_thread_counts() {
    let dir = TempDir::new().unwrap();
    let c = generate(dir.path(), "ellipse", &["n=512"]);
    let c = c.to_str().unwrap();
    let a = run(&["thickness", c]);
    let b = run(&["thickness", c, "--threads", "1"]);
    let d = run(&["thickness", c, "--threads", "3"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, d.stdout);
}

#[test]
fn generate_round_trip_is_idempotent() {
    let dir = TempDir::new().unwrap();
    let c = generate(dir.path(), "torus_knot_sample", &["n=300"]);
    let first = std::fs::read_to_string(&c).unwrap();
    let doc = thickcurve::CurveDocument::read(&c, true).unwrap();
    assert_eq!(doc.to_json_string(), first);
}

#[test]
fn seed_is_echoed_and_oracle_is_reproducible() {
    let args = [
        "oracle", "--p", "0,0", "--q", "6,2", "--v", "1,0", "--w", "0,1", "--segments", "64", "--restarts", "2",
        "--seed", "17",
    ];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(json(&a)["seed"], 17);
    assert_eq!(a.stdout, run(&args).stdout);
}

#[test]
fn relax_writes_trace_csv() {
    let dir = TempDir::new().unwrap();
    let c = generate(dir.path(), "bumped_circle", &["n=128"]);
    let trace = dir.path().join("trace.csv");
    let out = run(&[
        "relax",
        c.to_str().unwrap(),
        "--cap",
        "1.5",
        "--steps",
        "50",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(trace).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("step,length,r_o,ropelength,accepted"));
    assert_eq!(lines.count(), 51);
}

#[test]
fn relax_below_current_curvature_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let c = generate(dir.path(), "circle", &["n=128"]);
    let out = run(&["relax", c.to_str().unwrap(), "--cap", "0.5", "--steps", "5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn csv_input_and_per_sample_export() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("square.csv");
    let n = 200;
    let mut text = String::from("x,y\n");
    for k in 0..n {
        let a = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        text.push_str(&format!("{},{}\n", 2.0 * a.cos(), 2.0 * a.sin()));
    }
    std::fs::write(&path, text).unwrap();
    let csv = dir.path().join("kappa.csv");
    let out = run(&["curvature", path.to_str().unwrap(), "--csv", csv.to_str().unwrap(), "--lambda", "0.6"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!((num(&json(&out)["results"]["f_k"]) - 2.0).abs() < 2e-2);
    assert_eq!(std::fs::read_to_string(csv).unwrap().lines().count(), n + 1);
    let out = run(&["curvature", path.to_str().unwrap(), "--lambda", "0.4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn semicontinuity_of_shrinking_circles() {
    let dir = TempDir::new().unwrap();
    let mut paths = Vec::new();
    for m in 1..=4 {
        let p = dir.path().join(format!("c{m}.json"));
        let r = format!("r={}", 1.0 + 1.0 / m as f64);
        let out = run(&["generate", "circle", "-P", &r, "-P", "n=256", "-o", p.to_str().unwrap()]);
        assert!(out.status.success());
        paths.push(p);
    }
    paths.push(generate(dir.path(), "circle", &["n=256"]));
    let mut args = vec!["semicontinuity", "--tol", "0.26"];
    args.extend(paths.iter().map(|p| p.to_str().unwrap()));
    assert_eq!(run(&args).status.code(), Some(0));
    args[2] = "0.2";
    assert_eq!(run(&args).status.code(), Some(2));
}
