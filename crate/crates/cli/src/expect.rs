//! What the classification states: which configurations have constant
//! HSC, where the mobility condition vanishes, and the configurations the
//! full matrix runs.

use cpsym_core::algebras::{self, Scenario};
use cpsym_core::{CaseSpec, Family, GChoice, Params};
use serde::{Deserialize, Serialize};

/// `a == b` up to a relative `1e-12`.
fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * (1.0 + a.abs() + b.abs())
}

fn zero(a: f64) -> bool {
    a.abs() <= 1e-12
}

/// Constant HSC as stated in the classification, with the two corrections
/// the computation forces: the L2 relation `c1 = −ε c0 d1²/d0²` and the
/// D2a curvature `K_h = −9/d1²` (i.e. `G = κ s² + …` with `κ = 9/d1²`).
///
/// `None` for the 2D examples, which are not Kähler surfaces.
pub fn constant_hsc(spec: &CaseSpec) -> Option<bool> {
    let r = spec.resolved();
    let half = same(r.beta, -0.5);
    let minus_two = same(r.beta, -2.0);
    Some(match spec.family {
        Family::L1 => same(r.eps, -1.0) && same(r.c1.abs(), r.c0.abs()),
        Family::L2 => {
            (half && same(r.c1, -r.eps * r.c0 * r.d1 * r.d1 / (r.d0 * r.d0)))
                || (minus_two && same(r.eps, -1.0) && same(r.d1.abs(), r.d0.abs()))
        }
        Family::C1 => zero(r.vs0) || zero(r.vs1),
        Family::C2 => (half || minus_two) && (zero(r.vs0) || zero(r.vs1)),
        Family::D1 => flat_h(r.g),
        Family::D2a => matches!(r.g, GChoice::Quadratic { kappa, .. } if same(kappa * r.d1 * r.d1, 9.0)),
        Family::L3 | Family::L4 | Family::C3 | Family::C4 | Family::D2b | Family::D3 => false,
        Family::Fs | Family::FsModified | Family::BergmanModified | Family::EuclidModified => true,
        Family::Intro2dA | Family::Intro2dB | Family::Intro2dFlat => return None,
    })
}

/// `G'' ≡ 0` for `h = G ds0² + ds1²/G`.
fn flat_h(g: GChoice) -> bool {
    match g {
        GChoice::Linear { .. } => true,
        GChoice::Quadratic { kappa, .. } => zero(kappa),
        // exponent 2(μ1 + 1)/μ1 equal to 0 or 1
        GChoice::Power { mu1, .. } => same(mu1, -1.0) || same(mu1, -2.0),
        _ => false,
    }
}

/// Whether the mobility condition is stated to hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mobility {
    Vanishes,
    NonZero,
}

/// The "Sinjukov condition" column of the three tables, read literally.
///
/// For C1 the printed `ς² = ς̄²` is read as `ς0 ς1 = 0`. L4 carries the
/// printed condition `c0² ε + c1² = 0`, and C4 "no constraint" is read as a
/// condition that always holds, as for D1 and D2a.
pub fn mobility(spec: &CaseSpec) -> Option<Mobility> {
    let r = spec.resolved();
    let vanishes = match spec.family {
        Family::L1 | Family::L4 => zero(r.c0 * r.c0 * r.eps + r.c1 * r.c1),
        Family::L2 => {
            (same(r.beta, -0.5) && zero(r.c1 * r.d0 * r.d0 * r.eps + r.c0 * r.d1 * r.d1))
                || (same(r.beta, -2.0) && zero(r.d0 * r.d0 * r.eps + r.d1 * r.d1))
        }
        Family::C1 => zero(r.vs0 * r.vs1),
        Family::C2 => (same(r.beta, -0.5) || same(r.beta, -2.0)) && zero(r.vs0 * r.vs1),
        Family::L3 | Family::C3 | Family::D2b | Family::D3 => false,
        Family::C4 | Family::D1 | Family::D2a => true,
        _ => return None,
    };
    Some(if vanishes {
        Mobility::Vanishes
    } else {
        Mobility::NonZero
    })
}

/// The generator rows a configuration belongs to; empty when the
/// classification lists none (constant HSC, or no algebra stated).
pub fn scenarios(spec: &CaseSpec) -> Vec<Scenario> {
    if constant_hsc(spec) == Some(true) && spec.family != Family::Fs {
        return Vec::new();
    }
    let r = spec.resolved();
    match spec.family {
        Family::L1 | Family::L3 | Family::L4 | Family::C1 | Family::C3 => vec![Scenario::Only],
        Family::C4 => vec![Scenario::Only, Scenario::LiouvilleAnalogue],
        Family::L2 | Family::C2 => {
            if algebras::catalog(spec, Scenario::Exceptional).is_ok() {
                vec![Scenario::Exceptional]
            } else {
                vec![Scenario::Generic]
            }
        }
        Family::D1 | Family::D2a | Family::D2b | Family::D3 => {
            let k = match r.g {
                GChoice::Generic => 1,
                GChoice::Power { .. } | GChoice::Sine { .. } => 2,
                GChoice::Quadratic { .. } | GChoice::Exponential { .. } => 3,
                GChoice::Linear { .. } => 4,
            };
            vec![Scenario::Homothety(k)]
        }
        Family::Fs | Family::Intro2dA | Family::Intro2dB | Family::Intro2dFlat => vec![Scenario::Only],
        Family::FsModified | Family::BergmanModified | Family::EuclidModified => Vec::new(),
    }
}

/// A named configuration of the matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub label: String,
    pub spec: CaseSpec,
}

fn row(label: &str, family: Family, params: Params) -> Row {
    Row {
        label: label.to_string(),
        spec: CaseSpec::with_params(family, params),
    }
}

fn p() -> Params {
    Params::default()
}

/// The ten special configurations with constant HSC: the conditions of the
/// classification for L1, L2 (two branches), C1, C2 (two branches), D1 and
/// D2a, and the second sign choice for L1 and the second vanishing
/// coordinate of `ς` for C1.
pub fn constant_hsc_rows() -> Vec<Row> {
    let q = |kappa| Some(GChoice::Quadratic { kappa, mu1: 0.1, mu2: 3.0 });
    vec![
        row("L1 ε=−1, c1=c0", Family::L1, Params { eps: Some(-1.0), c0: Some(1.0), c1: Some(1.0), ..p() }),
        row("L1 ε=−1, c1=−c0", Family::L1, Params { eps: Some(-1.0), c0: Some(1.0), c1: Some(-1.0), ..p() }),
        row(
            "L2 β=−½, c1=−εc0d1²/d0²",
            Family::L2,
            Params { beta: Some(-0.5), eps: Some(1.0), c0: Some(1.0), d0: Some(1.0), d1: Some(1.4), c1: Some(-1.96), ..p() },
        ),
        row(
            "L2 β=−2, ε=−1, d1=d0",
            Family::L2,
            Params { beta: Some(-2.0), eps: Some(-1.0), d0: Some(1.0), d1: Some(1.0), ..p() },
        ),
        row("C1 ς1=0", Family::C1, Params { vs1: Some(0.0), ..p() }),
        row("C1 ς0=0", Family::C1, Params { vs0: Some(0.0), ..p() }),
        row("C2 β=−½, ς0=0", Family::C2, Params { beta: Some(-0.5), vs0: Some(0.0), ..p() }),
        row("C2 β=−2, ς1=0", Family::C2, Params { beta: Some(-2.0), vs1: Some(0.0), ..p() }),
        row(
            "D1 flat h",
            Family::D1,
            Params { g: Some(GChoice::Linear { mu1: 0.3, mu2: 2.0 }), ..p() },
        ),
        row("D2a K_h=−9/d1²", Family::D2a, Params { d1: Some(1.0), g: q(9.0), ..p() }),
    ]
}

/// One generic configuration (the family preset) per Kähler family.
pub fn generic_rows() -> Vec<Row> {
    Family::KAHLER_TYPES
        .iter()
        .map(|&f| Row {
            label: format!("{f} generic"),
            spec: CaseSpec::new(f),
        })
        .collect()
}

/// The configurations the mobility tables speak about beyond the constant-HSC
/// rows: parameters satisfying the printed L4 condition, and the "never
/// possible" families at the parameters that satisfy the other rows.
pub fn mobility_extra() -> Vec<Row> {
    vec![
        row("L3 ε=−1, c1=c0", Family::L3, Params { eps: Some(-1.0), c0: Some(1.0), c1: Some(1.0), ..p() }),
        row("L4 ε=−1, c1=c0", Family::L4, Params { eps: Some(-1.0), c0: Some(1.0), c1: Some(1.0), ..p() }),
        row("C3 ς1=0", Family::C3, Params { vs1: Some(0.0), ..p() }),
        row("C4 ς1=0", Family::C4, Params { vs1: Some(0.0), ..p() }),
    ]
}

/// The D2a configuration with the opposite curvature sign, `K_h = +9/d1²`.
pub fn d2a_opposite_sign() -> Row {
    row(
        "D2a K_h=+9/d1²",
        Family::D2a,
        Params { d1: Some(1.0), g: Some(GChoice::Quadratic { kappa: -9.0, mu1: 0.1, mu2: 3.0 }), ..p() },
    )
}

/// Generator-row presets of the catalog.
pub fn catalog_rows() -> Vec<Row> {
    algebras::rows()
        .into_iter()
        .map(|(f, sc)| Row {
            label: match sc {
                Scenario::Only => format!("{f}"),
                _ => format!("{f} {sc}"),
            },
            spec: algebras::preset(f, sc),
        })
        .collect()
}

/// Every configuration of the full matrix, without two rows resolving to
/// the same parameters; the first label wins.
pub fn full_matrix() -> Vec<Row> {
    let mut out: Vec<Row> = Vec::new();
    let defaults = Family::ALL.iter().map(|&f| Row {
        label: format!("{f}"),
        spec: CaseSpec::new(f),
    });
    let all = catalog_rows()
        .into_iter()
        .chain(defaults)
        .chain(constant_hsc_rows())
        .chain(mobility_extra())
        .chain([d2a_opposite_sign()]);
    for r in all {
        if !out.iter().any(|o| o.spec.family == r.spec.family && o.spec.resolved() == r.spec.resolved()) {
            out.push(r);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn special_rows_are_constant_and_generic_rows_are_not() {
        for r in constant_hsc_rows() {
            assert_eq!(constant_hsc(&r.spec), Some(true), "{}", r.label);
            r.spec.validate().unwrap();
        }
        for r in generic_rows() {
            assert_eq!(constant_hsc(&r.spec), Some(false), "{}", r.label);
        }
        assert_eq!(constant_hsc(&d2a_opposite_sign().spec), Some(false));
    }

    #[test]
    fn special_rows_satisfy_the_mobility_condition() {
        for r in constant_hsc_rows() {
            assert_eq!(mobility(&r.spec), Some(Mobility::Vanishes), "{}", r.label);
        }
        for f in [Family::L1, Family::L2, Family::L3, Family::C1, Family::C2, Family::C3, Family::D2b, Family::D3] {
            assert_eq!(mobility(&CaseSpec::new(f)), Some(Mobility::NonZero), "{f}");
        }
    }

    #[test]
    fn matrix_has_no_duplicates_and_covers_every_family() {
        let m = full_matrix();
        for f in Family::ALL {
            assert!(m.iter().any(|r| r.spec.family == f), "{f}");
        }
        for (i, a) in m.iter().enumerate() {
            assert!(m[i + 1..].iter().all(|b| b.spec.family != a.spec.family || b.spec.resolved() != a.spec.resolved()));
        }
    }

    #[test]
    fn scenarios_follow_the_g_choice() {
        for r in catalog_rows() {
            let sc = scenarios(&r.spec);
            let (_, want) = algebras::rows()
                .into_iter()
                .find(|(f, s)| *f == r.spec.family && algebras::preset(*f, *s) == r.spec)
                .unwrap();
            assert!(sc.contains(&want), "{}: {sc:?}", r.label);
        }
    }
}
