//! The verification report and its JSON and markdown renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Which side of the threshold a residual must fall on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Below,
    Above,
}

/// One check. The verdict is a function of `residual`, `threshold` and
/// `bound` only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    /// Acceptance criterion the check belongs to, `0` for supporting checks.
    pub criterion: u8,
    pub residual: f64,
    pub threshold: f64,
    pub bound: Bound,
    pub fitted: BTreeMap<String, f64>,
    pub verdict: Verdict,
    pub witness: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

/// Stand-in residual of a check whose computation failed; finite so that
/// the JSON round-trips.
pub const FAILED: f64 = f64::MAX;

impl Check {
    fn new(id: impl Into<String>, criterion: u8, residual: f64, threshold: f64, bound: Bound) -> Self {
        let pass = match bound {
            Bound::Below => residual < threshold,
            Bound::Above => residual > threshold && residual != FAILED,
        };
        Check {
            id: id.into(),
            criterion,
            residual,
            threshold,
            bound,
            fitted: BTreeMap::new(),
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            witness: Vec::new(),
            note: String::new(),
        }
    }

    pub fn below(id: impl Into<String>, criterion: u8, residual: f64, threshold: f64) -> Self {
        Check::new(id, criterion, sanitize(residual), threshold, Bound::Below)
    }

    pub fn above(id: impl Into<String>, criterion: u8, residual: f64, threshold: f64) -> Self {
        Check::new(id, criterion, sanitize(residual), threshold, Bound::Above)
    }

    /// A check whose computation returned an error.
    pub fn error(id: impl Into<String>, criterion: u8, err: impl std::fmt::Display) -> Self {
        Check::new(id, criterion, FAILED, 0.0, Bound::Below).note(err.to_string())
    }

    pub fn fit(mut self, key: &str, value: f64) -> Self {
        self.fitted.insert(key.to_string(), sanitize(value));
        self
    }

    pub fn witness(mut self, points: Vec<Vec<f64>>) -> Self {
        self.witness = points
            .into_iter()
            .map(|p| p.into_iter().map(sanitize).collect())
            .collect();
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Non-finite numbers do not survive JSON; they become [`FAILED`].
fn sanitize(x: f64) -> f64 {
    if x.is_finite() {
        x
    } else {
        FAILED
    }
}

/// A resolution of a question the source leaves open, determined during the
/// run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub id: String,
    pub finding: String,
    pub evidence: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub schema: u32,
    pub seed: u64,
    pub points: usize,
    pub order: usize,
    pub tol: f64,
    pub cases: Vec<String>,
    /// Seconds; the only field that differs between identical runs.
    pub wall_time: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub meta: Meta,
    pub checks: Vec<Check>,
    pub ledger: Vec<LedgerEntry>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    /// Checks of one acceptance criterion.
    pub fn criterion(&self, k: u8) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(move |c| c.criterion == k)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// The JSON with the wall time zeroed, for comparing runs.
    pub fn canonical_json(&self) -> String {
        let mut r = self.clone();
        r.meta.wall_time = 0.0;
        r.to_json()
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let m = &self.meta;
        let failed = self.failures().count();
        let _ = writeln!(out, "# Verification report\n");
        let _ = writeln!(
            out,
            "seed {} · points {} · order {} · tol {:e} · {} cases · {:.1} s\n",
            m.seed,
            m.points,
            m.order,
            m.tol,
            m.cases.len(),
            m.wall_time
        );
        let _ = writeln!(out, "{} checks, {} failed\n", self.checks.len(), failed);

        let _ = writeln!(out, "## Constant holomorphic sectional curvature\n");
        let _ = writeln!(out, "| case | expected | mean HSC | spread | verdict |");
        let _ = writeln!(out, "|---|---|---|---|---|");
        for c in self.checks.iter().filter(|c| c.id.ends_with("/hsc")) {
            let expected = match c.bound {
                Bound::Below => "constant",
                Bound::Above => "non-constant",
            };
            let _ = writeln!(
                out,
                "| {} | {} | {} | {:.2e} | {} |",
                strip(&c.id, "/hsc"),
                expected,
                fmt_opt(c.fitted.get("mean")),
                c.residual,
                verdict(c)
            );
        }

        let _ = writeln!(out, "\n## Mobility condition\n");
        let _ = writeln!(out, "| case | expected | value | verdict |");
        let _ = writeln!(out, "|---|---|---|---|");
        for c in self.checks.iter().filter(|c| c.id.ends_with("/mobility")) {
            let expected = match c.bound {
                Bound::Below => "vanishes",
                Bound::Above => "nonzero",
            };
            let _ = writeln!(
                out,
                "| {} | {} | {:.2e} | {} |",
                strip(&c.id, "/mobility"),
                expected,
                c.residual,
                verdict(c)
            );
        }

        let _ = writeln!(out, "\n## Algebra dimensions\n");
        let _ = writeln!(out, "| row | claimed | verdict | computed |");
        let _ = writeln!(out, "|---|---|---|---|");
        for c in self.checks.iter().filter(|c| c.id.ends_with("/dimension")) {
            let claimed = c.fitted.get("claimed").copied().unwrap_or(f64::NAN);
            let computed = c.fitted.get("computed").copied().unwrap_or(f64::NAN);
            let _ = writeln!(
                out,
                "| {} | dim {} | {} | {} |",
                strip(&c.id, "/dimension"),
                claimed,
                verdict(c),
                computed
            );
        }

        let _ = writeln!(out, "\n## Checks by criterion\n");
        let mut crits: Vec<u8> = self.checks.iter().map(|c| c.criterion).collect();
        crits.sort_unstable();
        crits.dedup();
        for k in crits {
            let title = if k == 0 {
                "Supporting checks".to_string()
            } else {
                format!("Criterion {k}")
            };
            let _ = writeln!(out, "### {title}\n");
            let _ = writeln!(out, "| check | residual | bound | verdict | note |");
            let _ = writeln!(out, "|---|---|---|---|---|");
            for c in self.criterion(k) {
                let bound = match c.bound {
                    Bound::Below => format!("< {:.0e}", c.threshold),
                    Bound::Above => format!("> {:.0e}", c.threshold),
                };
                let _ = writeln!(
                    out,
                    "| {} | {:.2e} | {} | {} | {} |",
                    c.id,
                    c.residual,
                    bound,
                    verdict(c),
                    c.note.replace('|', "/")
                );
            }
            out.push('\n');
        }

        let _ = writeln!(out, "## Ledger\n");
        for e in &self.ledger {
            let _ = writeln!(out, "- **{}**: {}", e.id, e.finding);
        }
        out
    }
}

fn strip<'a>(id: &'a str, suffix: &str) -> &'a str {
    id.strip_suffix(suffix).unwrap_or(id)
}

fn verdict(c: &Check) -> &'static str {
    if c.passed() {
        "PASS"
    } else {
        "FAIL"
    }
}

fn fmt_opt(x: Option<&f64>) -> String {
    x.map(|v| format!("{v:.6}")).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VerificationReport {
        VerificationReport {
            meta: Meta {
                schema: SCHEMA,
                seed: 42,
                points: 20,
                order: 4,
                tol: 1e-8,
                cases: vec!["L1".into()],
                wall_time: 1.25,
            },
            checks: vec![
                Check::below("L1/dimension", 4, 0.0, 0.5).fit("claimed", 4.0).fit("computed", 4.0),
                Check::above("L1 generic/hsc", 2, 3.5, 1e-8)
                    .fit("mean", 0.1 + 0.2)
                    .witness(vec![vec![0.1, 0.2, 0.3, 0.4]]),
                Check::error("L1/kahler/g", 1, "singular"),
            ],
            ledger: vec![LedgerEntry {
                id: "x".into(),
                finding: "y".into(),
                evidence: BTreeMap::from([("a".to_string(), 1.0 / 3.0)]),
            }],
        }
    }

    #[test]
    fn verdicts_follow_the_residual() {
        assert!(Check::below("a", 0, 1e-9, 1e-8).passed());
        assert!(!Check::below("a", 0, 1e-8, 1e-8).passed());
        assert!(Check::above("a", 0, 1.0, 1e-3).passed());
        assert!(!Check::above("a", 0, f64::NAN, 1e-3).passed());
        assert!(!Check::below("a", 0, f64::NAN, 1e-3).passed());
        assert!(!Check::error("a", 0, "boom").passed());
    }

    #[test]
    fn json_round_trips() {
        let r = sample();
        assert_eq!(VerificationReport::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn markdown_has_the_dimension_row() {
        let md = sample().to_markdown();
        assert!(md.contains("L1 | dim 4 | PASS"), "{md}");
        assert!(md.contains("| L1 generic | non-constant |"));
    }

    #[test]
    fn exit_code_is_a_function_of_verdicts() {
        let mut r = sample();
        assert_eq!(r.exit_code(), 1);
        r.checks.pop();
        assert_eq!(r.exit_code(), 0);
    }
}
