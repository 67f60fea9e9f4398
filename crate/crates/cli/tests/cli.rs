use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn gmorita(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gmorita")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn failing(r: &Value) -> Vec<String> {
    r["results"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|c| c["invariants"].as_array().unwrap().iter())
        .filter(|i| i["pass"] == false)
        .map(|i| i["name"].as_str().unwrap().to_string())
        .collect()
}

fn block_dims(group: &str, p: &str) -> Vec<u64> {
    let path = scenario(group);
    let out = gmorita(&["blocks", path.to_str().unwrap(), "--p", p, "--oracle"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert!(failing(&r).is_empty());
    r["results"][0]["data"]["block_dims"].as_array().unwrap().iter().map(|d| d.as_u64().unwrap()).collect()
}

#[test]
fn blocks_of_s3_over_f2() {
    assert_eq!(block_dims("s3.json", "2"), vec![2, 4]);
}

#[test]
fn cyclic_p_group_has_one_block() {
    assert_eq!(block_dims("c3.json", "3"), vec![3]);
}

#[test]
fn trivial_group_has_one_block() {
    assert_eq!(block_dims("c1.json", "5"), vec![1]);
}

#[test]
fn blocks_rejects_composite_modulus() {
    let path = scenario("s3.json");
    let out = gmorita(&["blocks", path.to_str().unwrap(), "--p", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fixture_pipeline_passes() {
    let path = scenario("fixture.json");
    let out = gmorita(&["verify", path.to_str().unwrap(), "--oracle"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = report(&out);
    let checks: Vec<&str> = r["results"].as_array().unwrap().iter().map(|c| c["check"].as_str().unwrap()).collect();
    assert_eq!(checks, ["morita", "graded-morita", "diagram", "centralizer-layer", "butterfly"]);
}

#[test]
fn diagram_check_passes() {
    let path = scenario("fixture.json");
    let out = gmorita(&["verify", path.to_str().unwrap(), "--check", "diagram"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["results"][0]["status"], "pass");
}

#[test]
fn twisted_scenario_fails_the_diagram() {
    let path = scenario("twisted.json");
    let out = gmorita(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["status"], "fail");
    assert!(failing(&r).iter().any(|n| n == "θ′ ∘ φ₂ = φ₁ ∘ θ"), "{:?}", failing(&r));
}

#[test]
fn twist_breaks_the_bimodule_map_property() {
    let path = scenario("twisted.json");
    let out = gmorita(&["verify", path.to_str().unwrap(), "--check", "graded-morita"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!failing(&report(&out)).is_empty());
}

#[test]
fn butterfly_to_s3() {
    let path = scenario("butterfly_s3.json");
    let out = gmorita(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let data = &report(&out)["results"][0]["data"];
    assert!(data.is_object());
}

#[test]
fn hypothesis_violation_names_the_element() {
    let path = scenario("hyp3_violation.json");
    let out = gmorita(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("z = (0 1)"), "{text}");
}

#[test]
fn empty_pipeline_is_a_pass() {
    let path = scenario("empty_pipeline.json");
    let out = gmorita(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["status"], "pass");
    assert!(r["results"].as_array().unwrap().is_empty());
}

#[test]
fn malformed_json_exits_with_parse_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"version\": 1,").unwrap();
    let out = gmorita(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_field_is_a_parse_error() {
    let text = std::fs::read_to_string(scenario("fixture.json")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["colour"] = Value::from("blue");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("extra.json");
    std::fs::write(&path, v.to_string()).unwrap();
    assert_eq!(gmorita(&["verify", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn unsupported_version_is_a_parse_error() {
    let text = std::fs::read_to_string(scenario("fixture.json")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["version"] = Value::from(2);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v2.json");
    std::fs::write(&path, v.to_string()).unwrap();
    assert_eq!(gmorita(&["verify", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn missing_ambient_is_a_parse_error() {
    let path = scenario("twisted.json");
    assert_eq!(gmorita(&["verify", path.to_str().unwrap(), "--check", "butterfly"]).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let path = scenario("fixture.json");
    let args = ["verify", path.to_str().unwrap(), "--oracle", "--seed", "11"];
    let a = gmorita(&args);
    let b = gmorita(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(report(&a)["seed"], 11);
}

#[test]
fn out_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let path = scenario("fixture.json");
    let out = gmorita(&["verify", path.to_str().unwrap(), "--check", "morita", "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(r["results"][0]["check"], "morita");
}
