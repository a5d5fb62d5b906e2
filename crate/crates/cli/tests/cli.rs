use std::process::Command;

use cpsym_cli::VerificationReport;

fn cpsym(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cpsym")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn a_single_family_passes_and_round_trips() {
    let (code, stdout, _) = cpsym(&["--cases", "L1", "--points", "10"]);
    assert_eq!(code, 0, "{stdout}");
    let report = VerificationReport::from_json(&stdout).unwrap();
    assert!(report.passed());
    assert_eq!(report.meta.cases, vec!["L1".to_string()]);
    assert_eq!(VerificationReport::from_json(&report.to_json()).unwrap(), report);
    assert!(report.checks.iter().any(|c| c.id == "L1/dimension"));
}

#[test]
fn an_impossible_tolerance_fails_the_run() {
    let (code, stdout, stderr) = cpsym(&["--cases", "L1", "--points", "10", "--tol", "1e-20"]);
    assert_eq!(code, 1, "{stderr}");
    let report = VerificationReport::from_json(&stdout).unwrap();
    assert!(report.failures().any(|c| c.id.starts_with("L1/v")));
}

#[test]
fn bad_configuration_exits_2() {
    assert_eq!(cpsym(&["--cases", "L9"]).0, 2);
    assert_eq!(cpsym(&["--cases", "L1", "--points", "3"]).0, 2);
    assert_eq!(cpsym(&["--cases", "L1", "--format", "yaml"]).0, 2);
    assert_eq!(cpsym(&["--cases", "/nonexistent/cases.json"]).0, 2);
}

#[test]
fn json_case_files_and_markdown_output() {
    let dir = std::env::temp_dir().join(format!("cpsym-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cases = dir.join("cases.json");
    std::fs::write(&cases, r#"[{"family": "L2", "params": {"beta": -0.5}}]"#).unwrap();
    let out = dir.join("report.md");
    let (code, _, stderr) = cpsym(&[
        "--cases",
        cases.to_str().unwrap(),
        "--points",
        "10",
        "--format",
        "markdown",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{stderr}");
    let md = std::fs::read_to_string(&out).unwrap();
    assert!(md.contains("| L2 beta=-0.5 (i) | dim 3 | PASS | 3 |"), "{md}");

    std::fs::write(&cases, r#"{"family": "L2", "params": {"beta": 1.0}}"#).unwrap();
    assert_eq!(cpsym(&["--cases", cases.to_str().unwrap()]).0, 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn identical_seeds_give_identical_reports() {
    let args = ["--cases", "D2a,C4", "--points", "10", "--seed", "7"];
    let a = VerificationReport::from_json(&cpsym(&args).1).unwrap();
    let b = VerificationReport::from_json(&cpsym(&args).1).unwrap();
    assert_eq!(a.canonical_json(), b.canonical_json());
    assert_eq!(a.meta.seed, 7);
}

#[test]
fn list_prints_the_matrix() {
    let (code, stdout, _) = cpsym(&["--list"]);
    assert_eq!(code, 0);
    assert!(stdout.lines().any(|l| l.starts_with("D2a K_h=−9/d1²")));
    assert!(stdout.lines().count() > 40);
}
