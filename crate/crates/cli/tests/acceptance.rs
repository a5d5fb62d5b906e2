//! The ten acceptance criteria over the full matrix. Prints one PASS/FAIL
//! line per criterion. Runs without the test harness so the lines are
//! always shown.
//!
//! Three findings contradict the tabulated statements and fail honestly in the
//! report (see the README). The test asserts that those, and nothing else,
//! fail.

use std::time::{Duration, Instant};

use cpsym_cli::expect::generic_rows;
use cpsym_cli::suite;
use cpsym_cli::{Check, RunConfig, VerificationReport};

/// Checks that fail because the tables state something the computation
/// contradicts.
const KNOWN_DISCREPANCIES: [&str; 5] = [
    // "c0² ε + c1² = 0" for L4: the mobility entry never vanishes on L4.
    "L4 ε=−1, c1=c0/mobility",
    // "No constraint" for C4: the entry is nonzero everywhere.
    "C4/mobility",
    "C4 ς1=0/mobility",
    // D2b and D3 in scenario 3 carry a fifth independent generator.
    "D2b scenario 3/dimension",
    "D3 scenario 3/dimension",
];

fn line(k: u8, title: &str, checks: &[&Check], extra: Option<(bool, String)>) -> bool {
    let failing: Vec<&str> = checks.iter().filter(|c| !c.passed()).map(|c| c.id.as_str()).collect();
    let extra_ok = extra.as_ref().is_none_or(|(ok, _)| *ok);
    let ok = failing.is_empty() && extra_ok && (!checks.is_empty() || extra.is_some());
    let mut text = format!(
        "criterion {k:>2} {}: {title} ({} checks",
        if ok { "PASS" } else { "FAIL" },
        checks.len()
    );
    if let Some((_, e)) = &extra {
        text += &format!(", {e}");
    }
    text.push(')');
    if !failing.is_empty() {
        text += &format!(" failing: {}", failing.join("; "));
    }
    println!("{text}");
    ok
}

fn of(r: &VerificationReport, k: u8) -> Vec<&Check> {
    r.criterion(k).collect()
}

fn main() {
    let cfg = RunConfig::default();

    let t = Instant::now();
    let kahler: Vec<Check> = generic_rows().iter().flat_map(|row| suite::kahler_checks(row, &cfg)).collect();
    let kahler_time = t.elapsed();

    let first = suite::run(&cfg);
    let wall = Duration::from_secs_f64(first.meta.wall_time);
    let second = suite::run(&cfg);
    let deterministic = first.canonical_json() == second.canonical_json();
    let r = &first;

    let k1: Vec<&Check> = kahler.iter().collect();
    let families = k1.iter().filter(|c| c.id.ends_with("/kahler/g")).count();
    let mut verdicts = vec![line(
        1,
        "Kähler residuals of g, companions and pencils",
        &k1,
        Some((families == 12 && kahler_time.as_secs_f64() < 30.0, format!("{families} families in {:.1} s", kahler_time.as_secs_f64()))),
    )];
    verdicts.push(line(2, "constant HSC exactly on the special rows", &of(r, 2), None));
    verdicts.push(line(3, "mobility condition as tabulated", &of(r, 3), None));
    verdicts.push(line(4, "algebra dimensions, closure, Jacobi", &of(r, 4), None));
    verdicts.push(line(5, "field equations, constant relations, transport", &of(r, 5), None));
    verdicts.push(line(6, "degenerate lifts", &of(r, 6), None));
    verdicts.push(line(7, "Fubini-Study symmetries and model connections", &of(r, 7), None));
    verdicts.push(line(8, "ODE symmetry algebras", &of(r, 8), None));
    verdicts.push(line(9, "jet derivatives against finite differences", &of(r, 9), None));
    verdicts.push(line(
        10,
        "wall time and determinism",
        &[],
        Some((
            wall.as_secs_f64() < 300.0 && deterministic,
            format!("{:.1} s, identical reports: {deterministic}", wall.as_secs_f64()),
        )),
    ));

    for c in r.failures() {
        println!("  FAIL {} residual {:.3e} ({:?} {:.1e}) {}", c.id, c.residual, c.bound, c.threshold, c.note);
    }
    for e in &r.ledger {
        println!("  ledger {}: {}", e.id, e.finding);
    }

    let unexpected: Vec<&str> = r
        .failures()
        .map(|c| c.id.as_str())
        .filter(|id| !KNOWN_DISCREPANCIES.contains(id))
        .collect();
    assert!(unexpected.is_empty(), "unexpected failures: {unexpected:?}");
    for id in KNOWN_DISCREPANCIES {
        assert!(r.checks.iter().any(|c| c.id == id), "{id} not run");
    }
    for (k, ok) in verdicts.iter().enumerate() {
        if ![2, 3].contains(&k) {
            assert!(ok, "criterion {} failed", k + 1);
        }
    }
    assert_eq!(r.exit_code(), 1, "the known discrepancies fail the run");
}
