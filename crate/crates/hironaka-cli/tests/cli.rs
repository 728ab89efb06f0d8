use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn job(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../jobs").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hironaka")).args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hironaka"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn strs(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

#[test]
fn polyhedron_of_cusp_boundary() {
    let out = run(&["polyhedron", job("cusp_boundary.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["vertices"], serde_json::json!([["0", "3/2"], ["3/2", "0"]]));
    assert_eq!(v["delta"], "3/2");
    assert_eq!(v["status"], "minimal");
    assert!(v["sigma"].as_array().unwrap().iter().all(|s| s["value"] == "7/3"));
}

#[test]
fn invariant_of_regular_chart_is_finished() {
    let out = run(&["invariant", job("regular.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["iota"]["iota0"]["hs"], serde_json::json!([1]));
    assert_eq!(strs(&v["iota"]["iotapoly"]), ["0", "0", "0", "0"]);
    assert_eq!(v["iota"]["iotac"]["delta"], "0");
    assert_eq!(v["iota"]["iotac"]["delta_o"], "0");
    assert_eq!(v["finished"], true);
    assert!(strs(&v["iota"]["notes"]).contains(&"resolution process is finished".to_string()));
}

#[test]
fn analyze_reports_case_and_stratum() {
    let out = run(&["analyze", job("two_lines.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["nu_star"], serde_json::json!([3]));
    assert_eq!(v["case"], "III");
    let comps: Vec<Vec<String>> = v["components"].as_array().unwrap().iter().map(|c| strs(&c["vars"])).collect();
    assert_eq!(comps, vec![vec!["x", "z"], vec!["y", "z"]]);
}

#[test]
fn blowup_locates_the_cusp_boundary_point() {
    let out = run(&["blowup", job("cusp_boundary.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let child = &v["children"][0];
    assert_eq!(strs(&child["chart"]["generators"]), ["y^2 + u1*u2^3 + u1^5"]);
    assert_eq!(strs(&child["iota"]["iotapoly"]), ["3/2", "3/2", "4/3", "1/2"]);
    assert_eq!(child["classification"]["class"], "very_o_near");
}

#[test]
fn resolve_then_export() {
    let dir = std::env::temp_dir().join(format!("hironaka-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let trace = dir.join("trace.json");
    let out = run(&["resolve", job("x2_y9z10.json").to_str().unwrap(), "--trace-out", trace.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["trace"]["status"], "resolved");
    assert_eq!(v["monotonicity"]["ok"], true);

    let dot = run(&["export", trace.to_str().unwrap()]);
    assert_eq!(dot.status.code(), Some(0));
    let text = String::from_utf8(dot.stdout).unwrap();
    assert!(text.starts_with("digraph resolution {"));
    assert!(text.contains("x^2 + y^9*z^17"));

    let again = run(&["export", trace.to_str().unwrap(), "--format", "json"]);
    let reparsed: Value = serde_json::from_slice(&again.stdout).unwrap();
    assert_eq!(reparsed, v["trace"]);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reports_are_deterministic() {
    let a = run(&["resolve", job("cusp_boundary.json").to_str().unwrap()]);
    let b = run(&["resolve", job("cusp_boundary.json").to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn input_errors_exit_2() {
    let bad_var = r#"{"field":{"kind":"rationals"},"variables":["x"],"generators":["x^2 + q"],"frame":{"u":[],"y":["x"]}}"#;
    let out = run_stdin(&["analyze"], bad_var);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("generators[0]"));

    let out = run_stdin(&["analyze", "-"], "{\"field\": ");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));

    let not_prime = r#"{"field":{"kind":"prime_field","characteristic":4},"variables":["x"],"generators":["x^2"],"frame":{"u":[],"y":["x"]}}"#;
    assert_eq!(run_stdin(&["analyze"], not_prime).status.code(), Some(2));
}

#[test]
fn scope_errors_exit_3() {
    let two = r#"{"field":{"kind":"rationals"},"variables":["x","y","z"],"generators":["x^2","y^2"],"frame":{"u":["z"],"y":["x","y"]}}"#;
    let out = run_stdin(&["analyze"], two);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["resolve", job("x2_y9z10.json").to_str().unwrap(), "--max-steps", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["trace"]["status"], "step_limit");
}

#[test]
fn corrupted_trace_fails_the_check_with_exit_4() {
    let dir = std::env::temp_dir().join(format!("hironaka-cli-check-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = run(&["resolve", job("two_lines.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut v = json(&out);
    let good = dir.join("good.json");
    std::fs::write(&good, serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(run(&["export", good.to_str().unwrap(), "--check"]).status.code(), Some(0));

    let parent = v["trace"]["events"][0]["parent"].as_u64().unwrap() as usize;
    let child = v["trace"]["events"][0]["children"][0]["chart"].as_u64().unwrap() as usize;
    let iota = v["trace"]["charts"][parent]["iota"].clone();
    v["trace"]["charts"][child]["iota"] = iota;
    let bad = dir.join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    let out = run(&["export", bad.to_str().unwrap(), "--check"]);
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(&format!("from chart {} to chart {}", parent, child)), "{}", err);
    assert!(err.contains("\"comparison\": \"equal\""), "{}", err);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn escape_detection_over_f2() {
    let out = run(&["polyhedron", job("escape_f2.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "budget_exhausted");
    let log: Vec<Value> = v["log"].as_array().unwrap().iter().map(|l| l["vertex"].clone()).collect();
    assert_eq!(&log[..3], &[serde_json::json!(["3", "0"]), serde_json::json!(["6", "0"]), serde_json::json!(["12", "0"])]);
    assert_eq!(v["escape"]["message"], "axis vertex escapes to infinity");
    assert_eq!(v["escape"]["stable"]["vertices"], serde_json::json!([["0", "5/2"]]));
}
