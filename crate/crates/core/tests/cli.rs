//! End-to-end tests of the command-line interface: line formats and
//! exit codes.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nearring"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn member_true_exits_zero() {
    let out = run(&["member", "--basis", "x2", "2x^10"]);
    assert_eq!(stdout(&out).trim(), "MEMBER true");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn member_false_exits_one_and_reports_violations() {
    let out = run(&["member", "--basis", "x2", "x^10"]);
    let text = stdout(&out);
    assert!(text.starts_with("MEMBER false"), "got: {text}");
    assert!(text.contains("COND"), "expected a violation line, got: {text}");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn compose_prints_result() {
    let out = run(&["compose", "x^2+2", "2x^3-1"]);
    assert_eq!(stdout(&out).trim(), "4x^6 - 4x^3 + 3");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn closure_dumps_hnf() {
    let out = run(&["closure", "--gen", "x^2", "--degree-cap", "8"]);
    let text = stdout(&out);
    assert!(text.starts_with("HNF D=8 rows=4"), "got: {text}");
    assert!(text.contains("0 0 0 0 0 0 2 0 0"), "2x^6 row missing: {text}");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn compare_equal_passes() {
    let out = run(&[
        "compare",
        "--basis",
        "x2,x3",
        "--degree-cap",
        "13",
        "--format",
        "machine",
    ]);
    assert_eq!(stdout(&out).trim(), "RESULT compare PASS (equal)");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn witness_round_trips_through_verify() {
    let out = run(&["witness", "--gen", "x^2", "--gen", "x^3", "2x^5"]);
    let text = stdout(&out);
    let term = text.trim().strip_prefix("WITNESS ").unwrap().to_string();
    assert_eq!(out.status.code(), Some(0));
    let check = run(&[
        "verify", "--gen", "x^2", "--gen", "x^3", "--claim", "2x^5", "--format", "machine",
        &term,
    ]);
    assert_eq!(stdout(&check).trim(), "VERIFY true");
    assert_eq!(check.status.code(), Some(0));
}

#[test]
fn witness_absent_exits_one() {
    let out = run(&["witness", "--gen", "x^2", "--gen", "x^3", "x^5"]);
    assert_eq!(stdout(&out).trim(), "WITNESS absent");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_polynomial_exits_two_with_hint() {
    let out = run(&["member", "--basis", "x2", "2x^"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("grammar"), "expected grammar hint, got: {err}");
}

#[test]
fn infeasible_config_exits_two() {
    let out = run(&[
        "closure",
        "--gen",
        "x^16",
        "--degree-cap",
        "4",
        "--working-degree",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_separation_suite() {
    let out = run(&["check", "separation"]);
    let text = stdout(&out);
    assert!(text.contains("CHECK separation-member-2x10 PASS"), "got: {text}");
    assert!(text.trim().ends_with("RESULT check separation PASS"), "got: {text}");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn check_unknown_suite_exits_two() {
    let out = run(&["check", "everything"]);
    assert_eq!(out.status.code(), Some(2));
}
