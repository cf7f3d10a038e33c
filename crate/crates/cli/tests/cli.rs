use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn write_doc(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn balpoint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_balpoint")).args(args).output().expect("binary runs")
}

fn run_doc(command: &str, body: &str, extra: &[&str]) -> (i32, Value, Output) {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(dir.path(), "doc.json", body);
    let mut args = vec![command, "--input", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = balpoint(&args);
    let code = out.status.code().unwrap();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, json, out)
}

const BALANCED_PAIR: &str = r#"{"model": {"type": "lebrun_profile"}, "points": [-0.70710678118654746, 0.70710678118654746], "weights": [1.0, 1.0]}"#;
const UNBALANCED_PAIR: &str = r#"{"model": {"type": "lebrun_profile"}, "points": [-0.5, 0.2], "weights": [1.0, 1.0]}"#;
const FIXED_TRIPLE: &str =
    r#"{"model": {"type": "projective_torus", "m": 2}, "points": [[1,0,0],[0,1,0],[0,0,1]], "weights": [1,1,1]}"#;
const DEGENERATE: &str =
    r#"{"model": {"type": "projective_torus", "m": 2}, "points": [[1,1e-6,0],[1,2e-6,0]], "weights": [1,1]}"#;

#[test]
fn balanced_pair_passes_check() {
    let (code, json, _) = run_doc("check", BALANCED_PAIR, &[]);
    assert_eq!(code, 0);
    assert_eq!(json["tool"], "balpoint");
    assert_eq!(json["command"], "check");
    assert_eq!(json["report"]["balancing"]["holds"], true);
    assert_eq!(json["input_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn fixed_point_triple_fails_general_position() {
    let (code, json, _) = run_doc("check", FIXED_TRIPLE, &[]);
    assert_eq!(code, 2);
    assert_eq!(json["report"]["general_position"]["holds"], false);
    assert_eq!(json["report"]["genericity"]["holds"], true);
}

#[test]
fn malformed_input_exits_one_with_position() {
    let (code, _, out) = run_doc("check", "{\"model\": {\"type\": \"lebrun", &[]);
    assert_eq!(code, 1);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("doc.json:1:"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_keys_are_rejected() {
    let body = r#"{"model": {"type": "lebrun_profile"}, "points": [0.1, 0.2], "weights": [1, 1], "colour": 3}"#;
    let (code, _, out) = run_doc("check", body, &[]);
    assert_eq!(code, 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
}

#[test]
fn missing_file_exits_one() {
    let out = balpoint(&["check", "--input", "/nonexistent/doc.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn solve_reaches_closed_form_time() {
    let (code, json, _) = run_doc("solve", UNBALANCED_PAIR, &[]);
    assert_eq!(code, 0);
    assert_eq!(json["report"]["status"], "BALANCED");
    let t = json["report"]["s_star"][0].as_f64().unwrap();
    let oracle = 0.5f64.atanh() - 0.2f64.atanh();
    assert!((t - oracle).abs() < 1e-9, "{t} vs {oracle}");
    assert!((t - 0.34657).abs() < 1e-5);
}

#[test]
fn bisect_agrees_with_solve() {
    let (code, json, _) = run_doc("bisect", UNBALANCED_PAIR, &[]);
    assert_eq!(code, 0);
    let t = json["report"]["s_star"][0].as_f64().unwrap();
    assert!((t - (0.5f64.atanh() - 0.2f64.atanh())).abs() < 1e-9);
    assert_eq!(json["report"]["flowed_points"][0]["base"], "p1");
}

#[test]
fn degenerate_configuration_diverges() {
    let (code, json, _) = run_doc("solve", DEGENERATE, &[]);
    assert_eq!(code, 3);
    assert_eq!(json["report"]["status"], "DIVERGED_UNSTABLE");
}

#[test]
fn heights_for_equal_weights() {
    let (code, json, _) = run_doc("heights", UNBALANCED_PAIR, &[]);
    assert_eq!(code, 0);
    let z1 = json["report"]["zeta1"].as_f64().unwrap();
    let z2 = json["report"]["zeta2"].as_f64().unwrap();
    assert!((z1 + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-8);
    assert!((z2 - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-8);
}

#[test]
fn heights_needs_the_ruled_surface() {
    let (code, _, _) = run_doc("heights", FIXED_TRIPLE, &[]);
    assert_eq!(code, 1);
}

#[test]
fn sample_is_reproducible() {
    let body = r#"{"model": {"type": "projective_torus", "m": 2}, "weights": [1, 1, 1]}"#;
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(dir.path(), "doc.json", body);
    let args = ["sample", "--input", path.to_str().unwrap(), "--seed", "42", "--samples", "200"];
    let a = balpoint(&args);
    let b = balpoint(&args);
    assert_eq!(a.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    let json: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(json["report"]["samples"], 200);
    assert_eq!(json["report"]["seed"], 42);
}

#[test]
fn sample_writes_csv() {
    let body = r#"{"model": {"type": "projective_torus", "m": 2}, "weights": [1, 1, 1]}"#;
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(dir.path(), "doc.json", body);
    let csv = dir.path().join("trace.csv");
    let out =
        balpoint(&["sample", "--input", path.to_str().unwrap(), "--samples", "5", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(csv).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "index,verdict,residual,s_norm,iterations");
    assert_eq!(lines.len(), 6);
}

#[test]
fn certify_rejects_degenerate_base() {
    let (code, json, _) = run_doc("certify", FIXED_TRIPLE, &[]);
    assert_eq!(code, 2);
    assert_eq!(json["report"]["status"], "PRECONDITION_FAILED");
    assert_eq!(json["report"]["conditions"]["general_position"]["holds"], false);
}

#[test]
fn certify_balanced_pair() {
    let (code, json, _) = run_doc("certify", BALANCED_PAIR, &["--grid", "5"]);
    assert_eq!(code, 0);
    assert_eq!(json["report"]["samples"], 25);
    assert_eq!(json["report"]["successes"], 25);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(dir.path(), "doc.json", BALANCED_PAIR);
    let report = dir.path().join("report.json");
    let out = balpoint(&["check", "-i", path.to_str().unwrap(), "-o", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let json: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(json["command"], "check");
}
