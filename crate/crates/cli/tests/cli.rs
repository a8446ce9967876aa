//! Exit-code contract and golden behavior of the binary.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_haantjes"))
}

#[test]
fn list_prints_all_suites() {
    let out = bin().arg("list").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let count = text.lines().filter(|l| !l.trim().is_empty()).count();
    assert!(count >= 9, "expected at least nine suites, got {count}");
    for name in ["superintegrability", "elliptic", "obstruction", "numeric"] {
        assert!(text.contains(name));
    }
}

#[test]
fn unknown_suite_exits_2() {
    let out = bin().args(["run", "no-such-suite"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn passing_suite_exits_0() {
    let out = bin().args(["run", "superintegrability"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASSED"));
}

#[test]
fn elliptic_accepts_rational_interfocal_values() {
    let out = bin()
        .args(["run", "elliptic", "--k1", "3/5", "--k2", "4/5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn solve_reproduces_the_cartesian_operator() {
    let dir = std::env::temp_dir().join("haantjes-solve-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("family.txt");
    let out = bin()
        .args([
            "solve",
            "--H",
            "p1^2 + p2^2 + gamma1*(q1*p1+q2*p2) + gamma2*(q1*p1+q2*p2)^2",
            "--I",
            "(1 + gamma2*(q1^2+q2^2))*p2^2 + gamma1*q2*p2",
            "--deg",
            "2",
            "--momentum-free-a",
            "--out",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc = std::fs::read_to_string(&path).unwrap();
    let fx = haantjes::fixtures::parse_fixture(
        // skip the free-text header comment lines
        &doc.lines()
            .filter(|l| !l.trim_start().starts_with('#'))
            .collect::<Vec<_>>()
            .join("\n"),
    )
    .unwrap();
    let member = fx
        .tensors
        .get("haantjes_member_0")
        .expect("one filtered member");
    let env = haantjes::models::ParamEnv::symbolic_elliptic();
    let expect = haantjes::models::catalog(haantjes::models::CatalogName::KI2, &env)
        .unwrap()
        .tensor;
    assert!(member.equals(&expect));
}

#[test]
fn solve_with_impossible_target_reports_diagnostics() {
    let out = bin()
        .args(["solve", "--H", "p1^2 + p2^2", "--I", "q1", "--deg", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("uncancelled"));
}

#[test]
fn report_diff_detects_changes() {
    let dir = std::env::temp_dir().join("haantjes-diff-test");
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    let run = |path: &std::path::Path, seed: &str| {
        let out = bin()
            .args(["run", "ode-classification", "--format", "json", "--seed", seed, "--out"])
            .arg(path)
            .output()
            .unwrap();
        assert!(out.status.success());
    };
    run(&a, "1");
    run(&b, "1");
    let same = bin().args(["report-diff"]).args([&a, &b]).output().unwrap();
    assert_eq!(same.status.code(), Some(0));
    run(&b, "2");
    let diff = bin().args(["report-diff"]).args([&a, &b]).output().unwrap();
    assert_eq!(diff.status.code(), Some(1));
}
