//! Exit codes and output contracts of the installed binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn tempval(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tempval"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn check_fixture_plan(plan_path: &str) -> Output {
    tempval(&[
        "check",
        &fixture("elevators-domain.pddl"),
        &fixture("elevators-problem.pddl"),
        plan_path,
    ])
}

#[test]
fn valid_plan_prints_the_exact_success_string() {
    let out = check_fixture_plan(&fixture("elevators.tplan"));
    assert_eq!(out.status.code(), Some(0));
    // The success contract is machine-parsable: exactly these bytes.
    assert_eq!(out.stdout, b"valid Plan\n");
    assert!(out.stderr.is_empty());
}

#[test]
fn invalid_plan_reports_step_on_stderr_and_exits_one() {
    // Without reopening elevator 1, the final exit's door-open invariant
    // fails.
    let mutated = std::fs::read_to_string(fixture("elevators.tplan"))
        .unwrap()
        .lines()
        .filter(|l| *l != "4: (op e1)[1]")
        .collect::<Vec<_>>()
        .join("\n");
    let dir = std::env::temp_dir().join("tempval-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("mutated.tplan");
    std::fs::write(&path, mutated).unwrap();

    let out = check_fixture_plan(path.to_str().unwrap());
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("at step"), "stderr was: {stderr}");
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("error"));
}

#[test]
fn ill_formed_plan_exits_one() {
    let dir = std::env::temp_dir().join("tempval-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("unknown-action.tplan");
    std::fs::write(&path, "0: (teleport e1)[1]\n").unwrap();
    let out = check_fixture_plan(path.to_str().unwrap());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown action"));
}

#[test]
fn missing_file_exits_two() {
    let out = check_fixture_plan("/nonexistent/plan.tplan");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_domain_exits_two() {
    let dir = std::env::temp_dir().join("tempval-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.pddl");
    std::fs::write(&path, "(define (domain broken)").unwrap();
    let out = tempval(&[
        "check",
        path.to_str().unwrap(),
        &fixture("elevators-problem.pddl"),
        &fixture("elevators.tplan"),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_sixty_four() {
    let out = tempval(&[]);
    assert_eq!(out.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));

    let out = tempval(&["check", "only-one-file"]);
    assert_eq!(out.status.code(), Some(64));

    let out = tempval(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn help_exits_zero() {
    let out = tempval(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("tempval"));
}

#[test]
fn happenings_dump_starts_at_time_zero() {
    let out = tempval(&[
        "happenings",
        &fixture("elevators-domain.pddl"),
        &fixture("elevators-problem.pddl"),
        &fixture("elevators-prefix.tplan"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.starts_with("0: {(op e1)_start}\n"), "got: {stdout}");
    assert!(stdout.contains("0.375: {(op e1)_inv}"));
}

#[test]
fn empty_difftest_reports_no_cases_and_exits_zero() {
    let out = tempval(&["difftest", "--count", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("0 cases"));
}

#[test]
fn difftest_is_deterministic_for_a_seed() {
    let run = || {
        let out = tempval(&["difftest", "--seed", "11", "--count", "200"]);
        assert_eq!(out.status.code(), Some(0));
        String::from_utf8_lossy(&out.stdout)
            .split(" in ")
            .next()
            .unwrap()
            .to_string()
    };
    assert_eq!(run(), run());
}

#[test]
fn seeded_bug_runs_succeed_only_when_the_bug_is_found() {
    let out = tempval(&[
        "difftest",
        "--seed",
        "3",
        "--count",
        "1000",
        "--mutation",
        "missed-end-snap",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(!stdout.contains(" 0 disagreement(s)"), "got: {stdout}");
}
