//! End-to-end tests of the `mihopf` binary.

use serde_json::Value;
use std::process::{Command, Output};

fn mihopf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mihopf")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn delta_of_polynomial_letter() {
    let v = json_of(&mihopf(&["delta", "e(1,0)"]));
    let terms = v["delta"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["left"]["m"], serde_json::json!([0, 0]));
    assert_eq!(terms[0]["right"], serde_json::json!([["n:1,0", 1]]));
    assert_eq!(v["config"]["alpha"], "1/4");
}

#[test]
fn delta_of_two_edge_index() {
    let v = json_of(&mihopf(&["delta", "2e0+e1"]));
    assert_eq!(v["delta"].as_array().unwrap().len(), 4);
}

#[test]
fn delta_plus_and_antipode_of_a_shift() {
    let idx = r#"{"J":[],"m":[1,0]}"#;
    let d = json_of(&mihopf(&["delta-plus", idx]));
    assert_eq!(d["delta_plus"].as_array().unwrap().len(), 2);
    let s = json_of(&mihopf(&["antipode", idx]));
    let terms = s["antipode"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["num"], -1);
}

#[test]
fn gamma_of_the_counit_is_the_identity() {
    let dir = std::env::temp_dir().join(format!("mihopf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("char.json");
    std::fs::write(&path, r#"{"h":["0","0"],"tilt":[]}"#).unwrap();
    let v = json_of(&mihopf(&["gamma", "--char", path.to_str().unwrap(), "--beta", "2e0+e1"]));
    let terms = v["gamma"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["index"], serde_json::json!([["k:0", 2], ["k:1", 1]]));
}

#[test]
fn malformed_input_is_a_usage_error() {
    assert_eq!(mihopf(&["delta", "zz"]).status.code(), Some(2));
    assert_eq!(mihopf(&["verify", "no-such-identity"]).status.code(), Some(2));
    assert_eq!(mihopf(&["--alpha", "-1", "delta", "e0"]).status.code(), Some(2));
    assert_eq!(mihopf(&["delta-plus", "{}"]).status.code(), Some(2));
    assert_eq!(mihopf(&["verify", "comodule", "--max-hom", "3b"]).status.code(), Some(2));
}

#[test]
fn verify_identities_pass() {
    for args in [
        &["verify", "hopf-rp", "--max-edges", "4"][..],
        &["verify", "comodule", "--max-hom", "3a+2"],
        &["verify", "antipode", "--max-hom", "2a+1", "--max-len", "3"],
        &["verify", "faa-di-bruno"],
        &["--mode", "rp2", "verify", "translate", "--max-len", "3"],
    ] {
        let out = mihopf(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert!(v["checked"].as_u64().unwrap() > 0, "{args:?}");
        assert_eq!(v["counterexamples"], serde_json::json!([]));
    }
}

#[test]
fn model_defects() {
    let v = json_of(&mihopf(&["model", "--driver", "const:1", "--N", "200"]));
    assert!(v["tree_defect"].as_f64().unwrap() <= 1e-14);
    let v = json_of(&mihopf(&["model", "--driver", "cos", "--N", "2000"]));
    assert!(v["tree_defect"].as_f64().unwrap() < 1e-10);
    let v = json_of(&mihopf(&["model", "--max-edges", "0"]));
    let names: Vec<&String> = v["final_values"].as_object().unwrap().keys().collect();
    assert_eq!(names, ["e0"]);
}

#[test]
fn model_writes_csv() {
    let path = std::env::temp_dir().join(format!("mihopf-model-{}.csv", std::process::id()));
    json_of(&mihopf(&["model", "--N", "10", "--max-edges", "2", "--csv", path.to_str().unwrap()]));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "x,xi,e0,e0+e1,e0+2e1,2e0+e2");
    assert_eq!(lines.count(), 11);
}

#[test]
fn output_is_deterministic() {
    let args = ["--alpha", "1/2", "verify", "group-laws", "--max-hom", "a+1", "--max-len", "3", "--samples", "2"];
    let a = mihopf(&args);
    let b = mihopf(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn flags_override_the_config_file() {
    let path = std::env::temp_dir().join(format!("mihopf-config-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"alpha":"1/3","weights":[1,1]}"#).unwrap();
    let p = path.to_str().unwrap();
    let v = json_of(&mihopf(&["--config", p, "delta", "e0"]));
    assert_eq!(v["config"]["alpha"], "1/3");
    assert_eq!(v["config"]["weights"], serde_json::json!([1, 1]));
    let v = json_of(&mihopf(&["--config", p, "--alpha", "1/5", "delta", "e0"]));
    assert_eq!(v["config"]["alpha"], "1/5");
}
