//! End-to-end checks of the command-line binary: exit codes, format
//! contracts, and byte-level determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_conifold"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("conifold-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn structure_suite_exits_zero() {
    let out = run(&["verify", "--suite", "structure", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("suite structure: PASS"));
}

#[test]
fn verify_writes_json_report() {
    let path = tmp("report.json");
    let out = run(&[
        "verify", "--suite", "moments", "--a", "1", "--seed", "7", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(parsed["passed"], serde_json::Value::Bool(true));
    assert_eq!(parsed["suites"][0]["suite"], "moments");
}

#[test]
fn eval_radius_example() {
    let out = run(&["eval", "--xyuv", "1,1,1,1", "--a", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(parsed["rsq"], serde_json::json!(4.0));
}

#[test]
fn eval_z_conversion_example() {
    // the bare z-axis point is off the cone; the conversion is still
    // reported and the exit code flags it
    let out = run(&["eval", "--z", "1,0,0,0", "--a", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let x = parsed["xyuv"]["X"][0].as_f64().unwrap();
    let y = parsed["xyuv"]["Y"][0].as_f64().unwrap();
    assert!((x - 0.5f64.sqrt()).abs() < 1e-12);
    assert!((y - 0.5f64.sqrt()).abs() < 1e-12);
    assert_eq!(parsed["xyuv"]["U"][0].as_f64().unwrap(), 0.0);
}

#[test]
fn eval_exit_codes() {
    assert_eq!(run(&["eval", "--xyuv", "1,1,1,2", "--a", "1"]).status.code(), Some(1));
    assert_eq!(run(&["eval", "--xyuv", "1,1,1,zz", "--a", "1"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--xyuv", "1,1,1", "--a", "1"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--a", "1"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--xyuv", "1,1,1,1", "--z", "1,0,0,0"]).status.code(), Some(2));
}

#[test]
fn leaf_csv_is_deterministic() {
    let args = [
        "leaf", "t2", "--c", "0.3,0.1,0.2", "--a", "1", "--grid", "4,4,3", "--seed", "42",
        "--format", "csv",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout, "outputs differ between identical runs");
    let text = String::from_utf8_lossy(&first.stdout);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "ReX,ImX,ReY,ImY,ReU,ImU,ReV,ImV,ReLambdaPlus,ImLambdaPlus,rsq,lagrangian,special,calibration,cone"
    );
    assert_eq!(lines.count(), 4 * 4 * 3);
}

#[test]
fn leaf_obj_has_vertices_and_faces() {
    let path = tmp("so3.obj");
    let out = run(&[
        "leaf", "so3", "--c", "1", "--branch", "plus", "--a", "0", "--grid", "6,4,5",
        "--format", "obj", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let nv = text.lines().filter(|l| l.starts_with("v ")).count();
    let nf = text.lines().filter(|l| l.starts_with("f ")).count();
    assert!(nv > 0 && nf > 0, "empty mesh: {nv} vertices, {nf} faces");
    for line in text.lines().filter(|l| l.starts_with("f ")) {
        for idx in line[2..].split_whitespace() {
            let k: usize = idx.parse().unwrap();
            assert!(k >= 1 && k <= nv, "face index {k} out of range 1..={nv}");
        }
    }
}

#[test]
fn leaf_json_reports_certification() {
    let out = run(&[
        "leaf", "so3", "--c", "0.5", "--a", "0", "--grid", "4,4,4", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(parsed["report"]["passed"], serde_json::Value::Bool(true));
}

#[test]
fn cone_table_monotone() {
    let out = run(&["cone", "--family", "so3", "--c", "1", "--a", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("r,cone_residual\n"));
    assert!(text.contains("# monotone_decay=true"));
}

#[test]
fn perturbed_verify_fails_with_exit_one() {
    let out = run(&[
        "verify", "--suite", "t2", "--a", "1", "--seed", "42", "--c1", "0.3", "--c2", "0.1",
        "--c3", "0.2", "--perturb",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn thread_cap_env_is_honored() {
    let out = bin()
        .env("CONIFOLD_SLAG_THREADS", "1")
        .args(["verify", "--suite", "flat", "--seed", "42"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn output_is_atomic_no_temp_left_behind() {
    let path = tmp("atomic.csv");
    let out = run(&[
        "leaf", "t2", "--c", "0,0,0", "--a", "0", "--grid", "3,3,2", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(path.exists());
    let dir = path.parent().unwrap();
    let stray: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().contains(".tmp"))
        .collect();
    assert!(stray.is_empty(), "temp files left behind: {stray:?}");
}
