//! End-to-end runs of the `gliderpath` binary against the bundled files.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gliderpath"))
}

fn scenarios_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gliderpath-cli-test-{}", std::process::id()));
    let dir = dir.join(name);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// A small solvable scenario so the plan command stays fast. Random
/// sampling keeps the neighbour structure free of equal-depth alignments.
fn small_scenario(dir: &Path) -> PathBuf {
    let doc = serde_json::json!({
        "bounds": {"min": [-50.0, -50.0, -100.0], "max": [250.0, 50.0, 0.0]},
        "start": [0.0, 0.0, -10.0],
        "goal": [200.0, 0.0, -90.0],
        "n_positions": 40,
        "n_controls": 24,
        "k_neighbors": 8,
        "sampling": {"mode": "random", "seed": 11},
        "field": {"inline": {"layers": [
            {"depth": 0.0, "kind": "uniform", "u": 0.15, "v": 0.05},
            {"depth": -100.0, "kind": "uniform", "u": -0.05, "v": 0.0}
        ]}},
        "model": {"file": "models/default.json"}
    });
    // model by reference, resolved against the scenario's own directory
    let model_dir = dir.join("models");
    std::fs::create_dir_all(&model_dir).unwrap();
    std::fs::copy(
        scenarios_dir().join("models/default.json"),
        model_dir.join("default.json"),
    )
    .unwrap();
    let path = dir.join("scenario.json");
    std::fs::write(&path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    path
}

#[test]
fn plan_writes_outputs_and_exits_zero() {
    let dir = tmp("plan");
    let scenario = small_scenario(&dir);
    let out = dir.join("out");
    let status = bin()
        .args(["plan", "--scenario"])
        .arg(&scenario)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    for f in [
        "plan.json",
        "trajectory.json",
        "depth_profile.csv",
        "metrics.csv",
        "timings.csv",
    ] {
        assert!(out.join(f).exists(), "missing {f}");
    }
    let plan: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("plan.json")).unwrap()).unwrap();
    assert!(plan["total_time_s"].as_f64().unwrap() > 0.0);
    assert!(!plan["legs"].as_array().unwrap().is_empty());
    let traj: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("trajectory.json")).unwrap())
            .unwrap();
    let samples = traj["samples"].as_array().unwrap();
    assert!(samples.len() > 10);
    // starts at the scenario's start position
    assert_eq!(samples[0][1].as_f64().unwrap(), 0.0);
    assert_eq!(samples[0][3].as_f64().unwrap(), -10.0);
}

#[test]
fn plan_reports_no_solution_with_exit_code_2() {
    let dir = tmp("no_solution");
    // an infeasible world: uniform current far above the glider's speed
    let doc = serde_json::json!({
        "bounds": {"min": [-50.0, -50.0, -100.0], "max": [250.0, 50.0, 0.0]},
        "start": [0.0, 0.0, -10.0],
        "goal": [200.0, 0.0, -90.0],
        "n_positions": 8,
        "n_controls": 8,
        "k_neighbors": 4,
        "field": {"inline": {"layers": [
            {"depth": 0.0, "kind": "uniform", "u": 0.0, "v": 3.0}
        ]}},
        "model": {"inline": {"gamma_min_deg": 15.0, "gamma_max_deg": 45.0,
                              "ballast_max_kg": 1.0,
                              "table": [[0.0, 1.0], [45.0, 1.0]]}}
    });
    let scenario = dir.join("scenario.json");
    std::fs::write(&scenario, doc.to_string()).unwrap();
    let out = dir.join("out");
    let output = bin()
        .args(["plan", "--scenario"])
        .arg(&scenario)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(out.join("metrics.csv").exists());
    let metrics = std::fs::read_to_string(out.join("metrics.csv")).unwrap();
    assert!(metrics.lines().nth(1).unwrap().contains("false"));
    assert!(!out.join("plan.json").exists());
}

#[test]
fn bad_scenario_exits_one() {
    let dir = tmp("bad");
    let scenario = dir.join("scenario.json");
    std::fs::write(&scenario, "{\"bounds\": 42}").unwrap();
    let output = bin()
        .args(["plan", "--scenario"])
        .arg(&scenario)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(!output.stderr.is_empty());
}

#[test]
fn field_info_prints_layers() {
    let output = bin()
        .args(["field-info", "--field"])
        .arg(scenarios_dir().join("fields/desk_field.json"))
        .args(["--probes", "100", "--bounds=-140,-140,-182,140,140,0"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("layers: 4"), "{text}");
    assert_eq!(text.matches("max |div v|").count(), 4);
}

#[test]
fn density_reports_ratio_for_explicit_pair() {
    let output = bin()
        .args(["density", "--scenario"])
        .arg(scenarios_dir().join("desk_hard.json"))
        .args(["--controls", "54", "--from", "0,0,-26", "--to", "40,30,-52"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("rho_surface"), "{text}");
    assert!(text.contains("ratio"), "{text}");
}

#[test]
fn sweep_runs_a_tiny_spec() {
    let dir = tmp("sweep");
    let scenario = small_scenario(&dir);
    let spec = serde_json::json!({
        "scenario": scenario.file_name().unwrap().to_str().unwrap(),
        "control_counts": [8, 16],
        "seeds": [7],
        "methods": ["streamline", "baseline"]
    });
    let spec_path = dir.join("spec.json");
    std::fs::write(&spec_path, spec.to_string()).unwrap();
    let out = dir.join("out");
    let status = bin()
        .args(["sweep", "--spec"])
        .arg(&spec_path)
        .arg("--out")
        .arg(&out)
        .args(["--workers", "2"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let metrics = std::fs::read_to_string(out.join("metrics.csv")).unwrap();
    assert_eq!(metrics.lines().count(), 5, "header + 4 cells:\n{metrics}");
    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 5);
    assert!(out.join("timings.csv").exists());
}
