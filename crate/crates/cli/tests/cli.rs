use std::path::PathBuf;
use std::process::Command as Process;

use accelflow_cli::{run, Command, Format, RunConfig, EXIT_INPUT, EXIT_INTERNAL, EXIT_OK};

fn samples() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../samples")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("accelflow-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn interval_example_as_json() {
    let mut c = RunConfig::new(Command::SolveInterval, samples().join("ex21.ivs"));
    c.format = Format::Json;
    let out = run(&c);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v, serde_json::json!({"X1": "top", "X2": "[1,51]", "X3": "[1,51]", "X5": "empty"}));
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["X1", "X2", "X3", "X5"]);
}

#[test]
fn counter_agrees_with_the_oracle() {
    let mut c = RunConfig::new(Command::SolveInt, samples().join("loop.ics"));
    c.oracle = true;
    let out = run(&c);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.starts_with("X = 100\n"));
    assert!(out.stdout.contains("oracle: agree"));
}

#[test]
fn capped_oracle_is_inconclusive_not_a_failure() {
    let mut c = RunConfig::new(Command::SolveInt, samples().join("loop.ics"));
    c.oracle = true;
    c.max_iters = 5;
    let out = run(&c);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("oracle: inconclusive"), "{}", out.stdout);
}

#[test]
fn analyze_groups_by_point_and_filters() {
    let out = run(&RunConfig::new(Command::Analyze, samples().join("ex21.wl")));
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(out.stdout, "1: x = top\n2: x = [1,51]\n3: x = [1,51]\n5: x = empty\n");
    let mut c = RunConfig::new(Command::Analyze, samples().join("ex21.wl"));
    c.point = Some("5".into());
    assert_eq!(run(&c).stdout, "5: x = empty\n");
    c.point = Some("4".into());
    assert_eq!(run(&c).code, EXIT_INPUT);
}

#[test]
fn empty_system_is_an_empty_object() {
    let mut c = RunConfig::new(Command::SolveInt, scratch("empty.ics", ""));
    c.format = Format::Json;
    let out = run(&c);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(out.stdout.trim(), "{}");
}

#[test]
fn parse_errors_exit_2_with_a_position() {
    let path = scratch("bad.ics", "var X\nX >= add(X, Q)\n");
    let out = run(&RunConfig::new(Command::SolveInt, &path));
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("bad.ics:2:13: undeclared variable `Q`"), "{}", out.stderr);
    let out = run(&RunConfig::new(Command::SolveInt, PathBuf::from("/nonexistent/x.ics")));
    assert_eq!(out.code, EXIT_INPUT);
    let out = run(&RunConfig::new(Command::Analyze, scratch("bad.wl", "x = y;")));
    assert_eq!(out.code, EXIT_INPUT);
}

#[test]
fn arithmetic_limit_exits_4() {
    // The product of two 40000-bit magnitudes exceeds the 65536-bit limit.
    let big = format!("-{}", "9".repeat(12_000));
    let src = format!("var A B X\nA >= const({big})\nB >= const({big})\nX >= mulm(A, B)\n");
    let out = run(&RunConfig::new(Command::SolveInt, scratch("huge.ics", &src)));
    assert_eq!(out.code, EXIT_INTERNAL, "{}", out.stderr);
    assert!(out.stderr.contains("error:"));
}

#[test]
fn trace_goes_to_stderr() {
    let mut c = RunConfig::new(Command::SolveInt, samples().join("loop.ics"));
    c.trace = true;
    let out = run(&c);
    assert!(out.stderr.starts_with("trace: accelerate ["));
    assert!(!out.stdout.contains("trace"));
    let mut c = RunConfig::new(Command::Analyze, samples().join("ex21.wl"));
    c.trace = true;
    assert!(run(&c).stderr.contains("x@2.pos"));
}

#[test]
fn wrong_file_kind_is_rejected() {
    let out = run(&RunConfig::new(Command::SolveInt, samples().join("ex21.ivs")));
    assert_eq!(out.code, EXIT_INPUT);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_accelflow");
    let ok = Process::new(bin).args(["solve-int"]).arg(samples().join("loop.ics")).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("Capped = 100"));
    let usage = Process::new(bin).args(["solve-int", "--max-iters", "0"]).arg(samples().join("loop.ics")).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
    let bad = Process::new(bin).args(["analyze"]).arg(scratch("syntax.wl", "while (x+1 < 2) {}")).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains(":1:9:"));
}
