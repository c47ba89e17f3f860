use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str], config: &str) -> Output {
    let path = dir.join("cfg.json");
    std::fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_bethe"))
        .args(args)
        .arg("--config")
        .arg(&path)
        .output()
        .unwrap()
}

fn json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).unwrap()
}

#[test]
fn verify_exact_chain_is_exactly_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["verify"],
        r#"{"model":"xxx","N":3,"xi":["0","1/2","-1/3"]}"#,
    );
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["schema_version"], 1);
    let checks = report["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for check in checks {
        assert_eq!(check["value"], 0.0, "{check}");
        assert_eq!(check["status"], "pass");
        assert!(check.get("wall_ms").is_none());
    }
    // Exact parameters serialize as rational strings.
    assert_eq!(report["config"]["xi"][1], "1/2");
    assert!(checks[0]["inputs"]["lambda"].is_string());
}

#[test]
fn verify_xxz_within_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["verify"],
        r#"{"model":"xxz","N":2,"xi":[0.1,-0.2],"eta":0.5}"#,
    );
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    for check in report["checks"].as_array().unwrap() {
        assert!(check["value"].as_f64().unwrap() <= 1e-12, "{check}");
    }
    let lambda = &report["checks"][0]["inputs"]["lambda"];
    assert_eq!(lambda.as_array().unwrap().len(), 2);
}

#[test]
fn config_errors_exit_2_without_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["verify"],
        r#"{"model":"xxx","N":3,"xi":["0","1"]}"#,
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("xi has 2 entries"));

    let out = run(
        dir.path(),
        &["solve"],
        r#"{"model":"xxx","N":2,"homogeneous":"0","M":[3]}"#,
    );
    assert_eq!(out.status.code(), Some(2));

    let out = run(dir.path(), &["verify"], "not json");
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(env!("CARGO_BIN_EXE_bethe"))
        .arg("frobnicate")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn decompose_rows_and_closed_form_gating() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["decompose"],
        r#"{"model":"xxx","N":4,"xi":["0","1/2","-2/3","1/5"],"M":[2]}"#,
    );
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let checks = report["checks"].as_array().unwrap();
    // 3 two-component, 8 multi-component, 1 local-structure row.
    assert_eq!(checks.len(), 12);
    assert!(checks.iter().all(|c| c["value"] == 0.0));

    let out = run(
        dir.path(),
        &["decompose"],
        r#"{"model":"xxx","N":4,"xi":["0","1/2","-2/3","1/5"],"M":[2],"closed_form":true,"splits":[[2]]}"#,
    );
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    let closed = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "decompose/M=2/homogeneous-closed-form")
        .unwrap();
    assert_eq!(closed["status"], "error");
    assert!(closed["error"]
        .as_str()
        .unwrap()
        .contains("homogeneous only"));

    let out = run(
        dir.path(),
        &["decompose"],
        r#"{"model":"xxx","N":3,"homogeneous":"1/2","M":[1,2]}"#,
    );
    assert_eq!(out.status.code(), Some(0));
    let names: Vec<String> = json(&out)["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap().to_string())
        .collect();
    assert!(names.contains(&"decompose/M=2/homogeneous-closed-form".to_string()));
}

#[test]
fn solve_two_sites() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["solve"],
        r#"{"model":"xxx","N":2,"homogeneous":"0","M":[1],"probe":"1"}"#,
    );
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    let root = &checks[0]["inputs"]["roots"][0];
    assert!((root[0].as_f64().unwrap() + 0.5).abs() < 1e-12);
    assert!(root[1].as_f64().unwrap().abs() < 1e-12);
    let tau = &checks[0]["inputs"]["tau"];
    assert!((tau[0].as_f64().unwrap() - 3.0).abs() < 1e-12);
    assert_eq!(
        report["spectra"][0]["matched_bethe"]
            .as_array()
            .unwrap()
            .len(),
        1
    );
}

#[test]
fn spectrum_and_table_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["spectrum", "--format", "table"],
        r#"{"model":"xxx","N":2,"homogeneous":"0","probe":"1"}"#,
    );
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("spectrum/sector-consistency"));
    assert!(text.contains("2 checks: 2 passed, 0 failed, 0 errors"));
}

#[test]
fn seed_changes_draws_and_out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{"model":"xxx","N":2,"homogeneous":"0","suites":["rtt"],"samples":1}"#;
    let a = run(dir.path(), &["verify", "--seed", "1"], config);
    let b = run(dir.path(), &["verify", "--seed", "2"], config);
    assert_ne!(
        json(&a)["checks"][0]["inputs"],
        json(&b)["checks"][0]["inputs"]
    );

    let out_path = dir.path().join("report.json");
    let c = run(
        dir.path(),
        &["verify", "--seed", "1", "--out", out_path.to_str().unwrap()],
        config,
    );
    assert_eq!(std::fs::read(&out_path).unwrap(), c.stdout);
    assert_eq!(c.stdout, a.stdout);
}
