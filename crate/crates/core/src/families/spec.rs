use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    L1,
    L2,
    L3,
    L4,
    C1,
    C2,
    C3,
    C4,
    D1,
    D2a,
    D2b,
    D3,
    #[serde(rename = "FS")]
    Fs,
    #[serde(rename = "FS-modified")]
    FsModified,
    #[serde(rename = "Bergman-modified")]
    BergmanModified,
    #[serde(rename = "Euclid-modified")]
    EuclidModified,
    #[serde(rename = "Intro2D-a")]
    Intro2dA,
    #[serde(rename = "Intro2D-b")]
    Intro2dB,
    #[serde(rename = "Intro2D-flat")]
    Intro2dFlat,
}

impl Family {
    pub const ALL: [Family; 19] = [
        Family::L1,
        Family::L2,
        Family::L3,
        Family::L4,
        Family::C1,
        Family::C2,
        Family::C3,
        Family::C4,
        Family::D1,
        Family::D2a,
        Family::D2b,
        Family::D3,
        Family::Fs,
        Family::FsModified,
        Family::BergmanModified,
        Family::EuclidModified,
        Family::Intro2dA,
        Family::Intro2dB,
        Family::Intro2dFlat,
    ];

    /// The twelve four-dimensional families with an essential symmetry.
    pub const KAHLER_TYPES: [Family; 12] = [
        Family::L1,
        Family::L2,
        Family::L3,
        Family::L4,
        Family::C1,
        Family::C2,
        Family::C3,
        Family::C4,
        Family::D1,
        Family::D2a,
        Family::D2b,
        Family::D3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::L1 => "L1",
            Family::L2 => "L2",
            Family::L3 => "L3",
            Family::L4 => "L4",
            Family::C1 => "C1",
            Family::C2 => "C2",
            Family::C3 => "C3",
            Family::C4 => "C4",
            Family::D1 => "D1",
            Family::D2a => "D2a",
            Family::D2b => "D2b",
            Family::D3 => "D3",
            Family::Fs => "FS",
            Family::FsModified => "FS-modified",
            Family::BergmanModified => "Bergman-modified",
            Family::EuclidModified => "Euclid-modified",
            Family::Intro2dA => "Intro2D-a",
            Family::Intro2dB => "Intro2D-b",
            Family::Intro2dFlat => "Intro2D-flat",
        }
    }

    pub fn is_liouville(self) -> bool {
        matches!(self, Family::L1 | Family::L2 | Family::L3 | Family::L4)
    }

    pub fn is_complex(self) -> bool {
        matches!(self, Family::C1 | Family::C2 | Family::C3 | Family::C4)
    }

    pub fn is_degenerate(self) -> bool {
        matches!(self, Family::D1 | Family::D2a | Family::D2b | Family::D3)
    }

    pub fn is_constant_hsc_model(self) -> bool {
        matches!(
            self,
            Family::Fs | Family::FsModified | Family::BergmanModified | Family::EuclidModified
        )
    }

    pub fn is_2d(self) -> bool {
        matches!(
            self,
            Family::Intro2dA | Family::Intro2dB | Family::Intro2dFlat
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidSpec(format!("unknown family '{s}'")))
    }
}

/// Which 2D metric `h` (or conformal factor) a degenerate family uses.
///
/// For D1/D2a, `h = G ds0² + ds1²/G`; for D2b/D3, `h = e^{λ s0} G (ds0² + ds1²)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum GChoice {
    /// `1 + 0.3 s + 0.2 s³`, with nonzero third derivative.
    Generic,
    /// `κ s² + μ1 s + μ2`.
    Quadratic { kappa: f64, mu1: f64, mu2: f64 },
    /// `μ1 s + μ2`.
    Linear { mu1: f64, mu2: f64 },
    /// `κ (μ1 s + μ2)^{2(μ1+1)/μ1}`.
    Power { kappa: f64, mu1: f64, mu2: f64 },
    /// `k1 e^{k2 s}`.
    Exponential { k1: f64, k2: f64 },
    /// `k3 sin(k1 s + k2)^{(λ − 2 k1)/k1}` with `λ` the conformal exponent.
    Sine { k1: f64, k2: f64, k3: f64 },
}

/// Optional parameter overrides; anything absent falls back to the family
/// preset (see [`Resolved::preset`]).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vs0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vs1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<GChoice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
}

/// Fully resolved parameters of a case.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Resolved {
    pub eps: f64,
    pub beta: f64,
    pub c0: f64,
    pub c1: f64,
    pub d0: f64,
    pub d1: f64,
    pub vs0: f64,
    pub vs1: f64,
    pub g: GChoice,
    pub t1: f64,
    pub t2: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub kappa: f64,
}

impl Resolved {
    /// Generic defaults per family: all O(1) and avoiding every special
    /// parameter relation singled out by the classification.
    pub fn preset(family: Family) -> Resolved {
        let base = Resolved {
            eps: 1.0,
            beta: 0.5,
            c0: 1.0,
            c1: 2.0,
            d0: 1.0,
            d1: 1.4,
            vs0: 1.0,
            vs1: 0.6,
            g: GChoice::Generic,
            t1: 1.0,
            t2: 0.0,
            eps1: 1.0,
            eps2: 1.0,
            kappa: 4.0,
        };
        match family {
            Family::L2 => Resolved {
                c1: -0.8,
                ..base
            },
            Family::L3 => Resolved { c1: 1.5, ..base },
            Family::L4 => Resolved {
                beta: 0.4,
                c1: 1.3,
                ..base
            },
            Family::C4 => Resolved { beta: 0.4, ..base },
            Family::D1 | Family::D3 => Resolved { c1: 1.0, ..base },
            Family::D2a => Resolved {
                c1: 0.5,
                d1: 1.2,
                d0: 1.2,
                ..base
            },
            Family::D2b => Resolved {
                c1: 0.5,
                d1: 1.0,
                ..base
            },
            Family::FsModified | Family::EuclidModified => Resolved {
                eps1: -1.0,
                ..base
            },
            Family::BergmanModified => Resolved {
                eps1: -1.0,
                kappa: -4.0,
                ..base
            },
            _ => base,
        }
    }

    pub fn with(mut self, p: &Params) -> Resolved {
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = p.$f { self.$f = v; } )* };
        }
        take!(eps, beta, c0, c1, d0, d1, vs0, vs1, g, t1, t2, eps1, eps2, kappa);
        self
    }
}

/// One configured case: a family, its parameters and run settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseSpec {
    pub family: Family,
    #[serde(default)]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

impl CaseSpec {
    pub fn new(family: Family) -> Self {
        CaseSpec {
            family,
            params: Params::default(),
            seed: None,
            points: None,
            order: None,
            tol: None,
        }
    }

    pub fn with_params(family: Family, params: Params) -> Self {
        CaseSpec {
            params,
            ..CaseSpec::new(family)
        }
    }

    pub fn resolved(&self) -> Resolved {
        Resolved::preset(self.family).with(&self.params)
    }

    /// Check the parameter constraints the family formulas need.
    pub fn validate(&self) -> Result<Resolved> {
        let r = self.resolved();
        let fam = self.family;
        let bad = |msg: &str| Err(Error::InvalidSpec(format!("{fam}: {msg}")));
        if fam.is_liouville() || fam.is_complex() {
            if r.eps.abs() != 1.0 {
                return bad("eps must be ±1");
            }
        }
        match fam {
            Family::L1 | Family::L3 | Family::L4 if r.c0 == 0.0 || r.c1 == 0.0 => {
                return bad("c0, c1 must be nonzero")
            }
            Family::L2 => {
                if r.beta == 1.0 {
                    return bad("beta = 1 is excluded");
                }
                if r.c0 * r.c1 * r.d0 * r.d1 == 0.0 {
                    return bad("c_i, d_i must be nonzero");
                }
            }
            Family::C1 | Family::C2 | Family::C3 | Family::C4 => {
                if r.vs0 == 0.0 && r.vs1 == 0.0 {
                    return bad("varsigma must be nonzero");
                }
                if fam == Family::C2 && r.beta == 1.0 {
                    return bad("beta = 1 is excluded");
                }
            }
            Family::D1 | Family::D3 if r.c1 == 0.0 => return bad("c1 must be nonzero"),
            Family::D2a if r.c1 == 0.0 || r.d1 == 0.0 => return bad("c1, d1 must be nonzero"),
            Family::D2b => {
                if r.beta == 1.0 || r.beta == -2.0 {
                    return bad("beta = 1 and beta = -2 are excluded");
                }
                if r.c1 == 0.0 || r.d1 == 0.0 {
                    return bad("c1, d1 must be nonzero");
                }
            }
            Family::FsModified | Family::BergmanModified | Family::EuclidModified => {
                if r.eps1.abs() != 1.0 || r.eps2.abs() != 1.0 {
                    return bad("eps1, eps2 must be ±1");
                }
                if r.kappa == 0.0 && fam != Family::EuclidModified {
                    return bad("kappa must be nonzero");
                }
            }
            _ => {}
        }
        if fam.is_degenerate() {
            let ok = match (fam, r.g) {
                (Family::D1 | Family::D2a, GChoice::Sine { .. } | GChoice::Exponential { .. }) => false,
                (Family::D2b | Family::D3, GChoice::Power { .. } | GChoice::Quadratic { .. }) => false,
                (_, GChoice::Power { mu1, .. }) => mu1 != 0.0,
                (_, GChoice::Sine { k1, k3, .. }) => k1 != 0.0 && k3 != 0.0,
                _ => true,
            };
            if !ok {
                return bad("G choice does not fit this family's metric h");
            }
        }
        Ok(r)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: CaseSpec =
            serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("case spec serializes")
    }
}

/// Tags of the three 2D metrics with 2-, 3- and 8-dimensional geodesic
/// symmetry algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Intro2d {
    /// `e^{4x} dx² + e^{2x} dy²`
    A,
    /// `e^{3x} dx² + e^{x} dy²`
    B,
    /// `dx² + dy²`
    Flat,
}
