//! Scene-runner integration tests: golden scenes, exit codes, report
//! determinism, scene normal-form round-trips, and the seed environment
//! override.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use softlin_cli::scene::{emit_scene, parse_scene_str};

fn scenes_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenes")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_softlin"))
        .args(args)
        .env_remove("SOFTLIN_SEED")
        .output()
        .expect("spawn softlin")
}

fn run_scene_text(text: &str, extra: &[&str]) -> Output {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(text.as_bytes()).unwrap();
    let path = file.path().to_str().unwrap().to_string();
    let mut args = vec!["check", path.as_str()];
    args.extend_from_slice(extra);
    run(&args)
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn shipped_scenes_all_pass() {
    for entry in std::fs::read_dir(scenes_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let out = run(&["check", path.to_str().unwrap()]);
        assert_eq!(
            exit_code(&out),
            0,
            "{} failed:\n{}{}",
            path.display(),
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn remark_scene_reports_dependence_witness() {
    let path = scenes_dir().join("remark.json");
    let out = run(&["report", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("json report");
    let task = &report["tasks"][0];
    assert_eq!(task["verdict"], "pass");
    assert_eq!(task["values"]["independent"], false);
    assert_eq!(task["witness"]["parameter"], "1");
}

#[test]
fn equivalence_scene_reports_frozen_constants() {
    let path = scenes_dir().join("equivalence_p1_pinf.json");
    let out = run(&["report", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let values = &report["tasks"][0]["values"];
    for label in ["a", "b"] {
        assert!((values["a"][label].as_f64().unwrap() - 1.0).abs() < 1e-9);
        assert!((values["b"][label].as_f64().unwrap() - 3.0).abs() < 1e-9);
    }
}

#[test]
fn convergence_scene_reports_limit_near_zero() {
    let path = scenes_dir().join("convergence_inv_n.json");
    let out = run(&["report", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["tasks"][0]["values"]["status"], "converged");
    let limit = &report["tasks"][2]["values"]["limit"];
    for label in ["a", "b"] {
        assert!(limit[label][0].as_f64().unwrap().abs() < 1e-3);
    }
}

#[test]
fn reports_are_byte_identical_for_fixed_opts() {
    let path = scenes_dir().join("demo.json");
    let a = run(&["report", path.to_str().unwrap(), "--seed", "7"]);
    let b = run(&["report", path.to_str().unwrap(), "--seed", "7"]);
    assert_eq!(exit_code(&a), 0);
    assert_eq!(a.stdout, b.stdout, "report json must be deterministic");
}

#[test]
fn scene_normal_form_round_trips() {
    for entry in std::fs::read_dir(scenes_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap();
        let doc = parse_scene_str(&text).unwrap();
        let emitted = emit_scene(&doc.file);
        let reparsed = parse_scene_str(&emitted)
            .unwrap_or_else(|e| panic!("{} did not round-trip: {e}", path.display()));
        assert_eq!(doc.file, reparsed.file, "{}", path.display());
    }
}

#[test]
fn report_json_round_trips_losslessly() {
    use softlin_cli::report::Report;
    let path = scenes_dir().join("demo.json");
    let out = run(&["report", path.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    let parsed: Report = serde_json::from_str(&text).expect("report deserializes");
    let re_emitted = serde_json::to_string_pretty(&parsed).unwrap() + "\n";
    assert_eq!(text, re_emitted, "report normal form is stable");
}

#[test]
fn minimal_empty_scene_is_valid() {
    let out = run_scene_text(
        r#"{"schema": 1, "parameters": ["a"], "dimension": 1, "objects": {}, "tasks": []}"#,
        &[],
    );
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0 tasks"), "summary was: {text}");
}

#[test]
fn empty_report_serializes_empty_task_list() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(br#"{"schema":1,"parameters":["a"],"dimension":1}"#)
        .unwrap();
    let out = run(&["report", file.path().to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["tasks"], serde_json::json!([]));
}

#[test]
fn undeclared_reference_is_diagnosed_with_name_and_task_index() {
    let out = run_scene_text(
        r#"{
          "schema": 1, "parameters": ["a"], "dimension": 2,
          "objects": {},
          "tasks": [{"task": "independence", "vectors": ["x"]}]
        }"#,
        &[],
    );
    assert_eq!(exit_code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("\"x\""), "diagnostic names the reference: {err}");
    assert!(err.contains("task 0"), "diagnostic names the task index: {err}");
}

#[test]
fn duplicate_object_names_are_rejected() {
    let out = run_scene_text(
        r#"{
          "schema": 1, "parameters": ["a"], "dimension": 1,
          "objects": {
            "x": {"type": "soft_real", "values": {"a": 1.0}},
            "x": {"type": "soft_real", "values": {"a": 2.0}}
          },
          "tasks": []
        }"#,
        &[],
    );
    assert_eq!(exit_code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("duplicate"), "{err}");
}

#[test]
fn unknown_task_kind_is_rejected() {
    let out = run_scene_text(
        r#"{
          "schema": 1, "parameters": ["a"], "dimension": 1,
          "objects": {},
          "tasks": [{"task": "frobnicate"}]
        }"#,
        &[],
    );
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn dimension_clash_is_rejected() {
    let out = run_scene_text(
        r#"{
          "schema": 1, "parameters": ["a"], "dimension": 2,
          "objects": {"x": {"type": "soft_vector", "values": {"a": [1.0, 2.0, 3.0]}}},
          "tasks": []
        }"#,
        &[],
    );
    assert_eq!(exit_code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("dimension"), "{err}");
}

#[test]
fn property_violation_exits_one() {
    // a sphere is not convex; without an expectation the verdict is a violation
    let out = run_scene_text(
        r#"{
          "schema": 1, "parameters": ["a"], "dimension": 2,
          "objects": {
            "origin": {"type": "soft_vector", "values": {"a": [0.0, 0.0]}},
            "p2": {"type": "norm_family", "norms": {"a": {"p": "2"}}},
            "s": {"type": "region", "region": {"kind": "sphere", "family": "p2", "center": "origin", "radius": 1.0}}
          },
          "tasks": [{"task": "convexity", "region": "s", "trials": 50}]
        }"#,
        &[],
    );
    assert_eq!(exit_code(&out), 1);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("VIOLATION"), "{text}");
    assert!(text.contains("witness"), "counterexample rendered: {text}");
}

#[test]
fn seed_env_overrides_default_but_not_flag() {
    let path = scenes_dir().join("demo.json");
    let path = path.to_str().unwrap();

    let with_env = Command::new(env!("CARGO_BIN_EXE_softlin"))
        .args(["report", path])
        .env("SOFTLIN_SEED", "99")
        .output()
        .unwrap();
    let with_flag = run(&["report", path, "--seed", "99"]);
    assert_eq!(with_env.stdout, with_flag.stdout, "env sets the default seed");

    let flag_beats_env = Command::new(env!("CARGO_BIN_EXE_softlin"))
        .args(["report", path, "--seed", "3"])
        .env("SOFTLIN_SEED", "99")
        .output()
        .unwrap();
    let plain_flag = run(&["report", path, "--seed", "3"]);
    assert_eq!(
        flag_beats_env.stdout, plain_flag.stdout,
        "an explicit --seed wins over the environment"
    );
}
