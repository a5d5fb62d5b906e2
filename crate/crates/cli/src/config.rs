//! Run configuration and case selection.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use cpsym_core::jet::MAX_ORDER;
use cpsym_core::{CaseSpec, Family};
use serde::{Deserialize, Serialize};

use crate::expect::{self, Row};

/// Residual thresholds of the checks are stated at this tolerance and
/// scale linearly with the configured one.
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Markdown,
}

impl FromStr for Format {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "markdown" | "md" => Ok(Format::Markdown),
            _ => err(format!("unknown format '{s}' (json or markdown)")),
        }
    }
}

/// Which configurations to run.
#[derive(Clone, Debug, PartialEq)]
pub enum Cases {
    /// The full matrix of [`expect::full_matrix`].
    All,
    List(Vec<Row>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub cases: Cases,
    pub seed: u64,
    /// Sample points per check; at least 10.
    pub points: usize,
    /// Jet order of the Sinjukov and mobility checks and of the jet
    /// self-check.
    pub order: usize,
    /// In `(0, 1e-3]`.
    pub tol: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
    /// Worker threads; `1` runs everything on the calling thread.
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            cases: Cases::All,
            seed: 42,
            points: 20,
            order: 4,
            tol: DEFAULT_TOL,
            format: Format::Json,
            out: None,
            jobs: 1,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.points < 10 {
            return err(format!("points = {} but fits need at least 10", self.points));
        }
        if !(self.tol > 0.0 && self.tol <= 1e-3) {
            return err(format!("tol = {:e} is outside (0, 1e-3]", self.tol));
        }
        if !(3..=MAX_ORDER).contains(&self.order) {
            return err(format!("order = {} is outside 3..={MAX_ORDER}", self.order));
        }
        if self.jobs == 0 {
            return err("jobs must be at least 1");
        }
        if let Cases::List(rows) = &self.cases {
            if rows.is_empty() {
                return err("no cases selected");
            }
            for r in rows {
                r.spec.validate().map_err(|e| ConfigError(e.to_string()))?;
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> Vec<Row> {
        match &self.cases {
            Cases::All => expect::full_matrix(),
            Cases::List(rows) => rows.clone(),
        }
    }
}

/// A row label from the family and the explicitly set parameters.
pub fn label(spec: &CaseSpec) -> String {
    let params = serde_json::to_value(&spec.params).expect("params serialize");
    let set: Vec<String> = params
        .as_object()
        .map(|o| o.iter().map(|(k, v)| format!("{k}={}", compact(v))).collect())
        .unwrap_or_default();
    if set.is_empty() {
        spec.family.to_string()
    } else {
        format!("{} {}", spec.family, set.join(","))
    }
}

/// `quadratic(kappa=9.0,mu1=0.1,mu2=3.0)` for a tagged `G` choice.
fn compact(v: &serde_json::Value) -> String {
    match v.as_object() {
        Some(o) => {
            let tag = o.get("tag").and_then(|t| t.as_str()).unwrap_or("");
            let args: Vec<String> = o.iter().filter(|(k, _)| *k != "tag").map(|(k, v)| format!("{k}={v}")).collect();
            format!("{tag}({})", args.join(","))
        }
        None => v.to_string(),
    }
}

/// Parse `--cases`: `all`, a comma-separated list of family names, or the
/// path of a JSON file holding one case spec or an array of them.
pub fn parse_cases(arg: &str) -> Result<Cases, ConfigError> {
    let arg = arg.trim();
    if arg.eq_ignore_ascii_case("all") {
        return Ok(Cases::All);
    }
    if arg.ends_with(".json") || std::path::Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg).map_err(|e| ConfigError(format!("{arg}: {e}")))?;
        return parse_case_json(&text).map(Cases::List);
    }
    let mut rows = Vec::new();
    for name in arg.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let family = Family::from_str(name).map_err(|e| ConfigError(e.to_string()))?;
        rows.push(Row {
            label: family.to_string(),
            spec: CaseSpec::new(family),
        });
    }
    Ok(Cases::List(rows))
}

/// One case spec object or an array of them.
pub fn parse_case_json(text: &str) -> Result<Vec<Row>, ConfigError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| ConfigError(format!("config: {e}")))?;
    let items = match value {
        serde_json::Value::Array(a) => a,
        v => vec![v],
    };
    items
        .into_iter()
        .map(|v| {
            let spec = CaseSpec::from_json(&v.to_string()).map_err(|e| ConfigError(e.to_string()))?;
            Ok(Row {
                label: label(&spec),
                spec,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_lists_and_all() {
        assert_eq!(parse_cases("all").unwrap(), Cases::All);
        match parse_cases("L1, D2a").unwrap() {
            Cases::List(r) => {
                assert_eq!(r.len(), 2);
                assert_eq!(r[1].spec.family, Family::D2a);
            }
            _ => panic!(),
        }
        assert!(parse_cases("L9").is_err());
    }

    #[test]
    fn json_cases_carry_their_parameters() {
        let rows = parse_case_json(r#"[{"family": "L2", "params": {"beta": -0.5}}, {"family": "C1"}]"#).unwrap();
        assert_eq!(rows[0].spec.resolved().beta, -0.5);
        assert_eq!(rows[0].label, "L2 beta=-0.5");
        assert_eq!(rows[1].label, "C1");
        let rows = parse_case_json(r#"{"family": "D1", "params": {"g": {"tag": "linear", "mu1": 0.5, "mu2": 2.0}}}"#).unwrap();
        assert_eq!(rows[0].label, "D1 g=linear(mu1=0.5,mu2=2.0)");
        assert!(parse_case_json(r#"{"family": "L2", "params": {"beta": 1.0}}"#).is_err());
        assert!(parse_case_json("{").is_err());
    }

    #[test]
    fn validation_bounds() {
        let ok = RunConfig::default();
        assert!(ok.validate().is_ok());
        assert!(RunConfig { points: 9, ..ok.clone() }.validate().is_err());
        assert!(RunConfig { tol: 0.0, ..ok.clone() }.validate().is_err());
        assert!(RunConfig { tol: 1e-2, ..ok.clone() }.validate().is_err());
        assert!(RunConfig { tol: 1e-20, ..ok.clone() }.validate().is_ok());
        assert!(RunConfig { order: 2, ..ok }.validate().is_err());
    }
}
