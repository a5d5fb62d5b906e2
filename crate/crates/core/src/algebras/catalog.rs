//! Generator sets of the c-projective algebras, the Fubini-Study algebra,
//! the geodesic symmetry algebras of the three 2D examples and the
//! homothety algebras of the 2D metrics `h`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::VectorFieldExpr;
use crate::error::{Error, Result};
use crate::families::{CaseSpec, Family, GChoice, Params, Resolved};
use crate::jet::Jet;

/// Which row of a family's classification a generator set belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scenario {
    /// The family has a single row.
    Only,
    /// L2/C2 (i): `β ≠ 0` and no special relation between the constants.
    Generic,
    /// L2/C2 (ii): the 4-dimensional exceptional row.
    Exceptional,
    /// C4 with the `β`-dependent first generator of the L4 row, written in
    /// the complex coordinate; the printed C4 row repeats C3.
    LiouvilleAnalogue,
    /// Degenerate families: scenario `k` of the homothety analysis of `h`.
    Homothety(u8),
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scenario::Only => f.write_str("-"),
            Scenario::Generic => f.write_str("(i)"),
            Scenario::Exceptional => f.write_str("(ii)"),
            Scenario::LiouvilleAnalogue => f.write_str("analogue"),
            Scenario::Homothety(k) => write!(f, "scenario {k}"),
        }
    }
}

/// A labelled list of generators with the dimension the classification
/// claims for their span.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub family: Family,
    pub scenario: Scenario,
    pub spec: CaseSpec,
    pub fields: Vec<VectorFieldExpr>,
    pub claimed_dim: usize,
}

impl GeneratorSet {
    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    /// Plain-text listing, one generator per line.
    pub fn listing(&self) -> String {
        let mut out = format!(
            "{} {} (dim {})\n",
            self.family, self.scenario, self.claimed_dim
        );
        for (i, v) in self.fields.iter().enumerate() {
            out.push_str(&format!("  v{}: {}\n", i + 1, v.label));
        }
        out
    }
}

/// Every (family, scenario) row with a generator set, in report order.
pub fn rows() -> Vec<(Family, Scenario)> {
    use Family::*;
    use Scenario::*;
    vec![
        (L1, Only),
        (L2, Generic),
        (L2, Exceptional),
        (L3, Only),
        (L4, Only),
        (C1, Only),
        (C2, Generic),
        (C2, Exceptional),
        (C3, Only),
        (C4, Only),
        (C4, LiouvilleAnalogue),
        (D1, Homothety(1)),
        (D1, Homothety(2)),
        (D1, Homothety(3)),
        (D2a, Homothety(1)),
        (D2a, Homothety(2)),
        (D2a, Homothety(3)),
        (D2a, Homothety(4)),
        (D2b, Homothety(1)),
        (D2b, Homothety(2)),
        (D2b, Homothety(3)),
        (D3, Homothety(1)),
        (D3, Homothety(2)),
        (D3, Homothety(3)),
        (Fs, Only),
        (Intro2dA, Only),
        (Intro2dB, Only),
        (Intro2dFlat, Only),
    ]
}

/// Default parameters of a row: the family preset, adjusted so that the
/// row's defining condition holds.
///
/// L2 (ii) and C2 (ii) use `β = 0`, the only branch of the exceptional
/// condition on which their generators are symmetries. D1 scenario 3 uses
/// `G = s1² + 1` (Δ < 0), D2a scenario 3 the same `G` (away from the
/// constant-HSC value `κ = 9/d1²`), D2a scenario 4 `G = s1 + 2`. Power and
/// sine profiles use `κ = 1, μ1 = 1, μ2 = 2` and `k1 = 0.5, k2 = 1.2,
/// k3 = 1`; the flat D2b/D3 rows use `G = e^{0.7 s1}`.
pub fn preset(family: Family, scenario: Scenario) -> CaseSpec {
    let mut p = Params::default();
    match (family, scenario) {
        (Family::L2, Scenario::Exceptional) => p.beta = Some(0.0),
        (Family::C2, Scenario::Exceptional) => p.beta = Some(0.0),
        (_, Scenario::Homothety(k)) => {
            p.g = Some(match (family, k) {
                (_, 1) => GChoice::Generic,
                (Family::D1 | Family::D2a, 2) => GChoice::Power {
                    kappa: 1.0,
                    mu1: 1.0,
                    mu2: 2.0,
                },
                (Family::D1 | Family::D2a, 3) => GChoice::Quadratic {
                    kappa: 1.0,
                    mu1: 0.0,
                    mu2: 1.0,
                },
                (Family::D2a, 4) => GChoice::Linear { mu1: 1.0, mu2: 2.0 },
                (_, 2) => GChoice::Sine {
                    k1: 0.5,
                    k2: 1.2,
                    k3: 1.0,
                },
                _ => GChoice::Exponential { k1: 1.0, k2: 0.7 },
            })
        }
        _ => {}
    }
    CaseSpec::with_params(family, p)
}

/// The generator set of a row with the parameters of `spec`.
pub fn catalog(spec: &CaseSpec, scenario: Scenario) -> Result<GeneratorSet> {
    let fam = spec.family;
    let r = if fam.is_2d() || fam == Family::Fs {
        spec.resolved()
    } else {
        spec.validate()?
    };
    let bad = |msg: &str| -> Result<GeneratorSet> {
        Err(Error::InvalidSpec(format!("{fam} {scenario}: {msg}")))
    };
    let (fields, claimed_dim) = match (fam, scenario) {
        (Family::L1, Scenario::Only) => (liouville_l1(), 4),
        (Family::L2, Scenario::Generic) => {
            if l2_exceptional(&r) {
                return bad("parameters satisfy the exceptional condition");
            }
            (liouville_l2_generic(r.beta), 3)
        }
        (Family::L2, Scenario::Exceptional) => {
            if !l2_exceptional(&r) {
                return bad("needs β = 0 or ε = −1 with c1² d0² = c0² d1²");
            }
            (liouville_l2_exceptional(r.c0, r.c1), 4)
        }
        (Family::L3, Scenario::Only) => (translation_row(false, 3.0, 1.0, 0.0, 3.0), 3),
        (Family::L4, Scenario::Only) => {
            let b = 3.0 * r.beta;
            (translation_row(false, b, -1.0, 1.0, b), 3)
        }
        (Family::C1, Scenario::Only) => (complex_c1(), 4),
        (Family::C2, Scenario::Generic) => {
            if c2_exceptional(&r) {
                return bad("parameters satisfy the exceptional condition");
            }
            (
                translation_row(true, r.beta + 2.0, 0.0, 0.0, 2.0 * r.beta + 1.0),
                3,
            )
        }
        (Family::C2, Scenario::Exceptional) => {
            if !c2_exceptional(&r) {
                return bad("needs β = 0 or ς0 ς1 = 0");
            }
            (complex_c2_exceptional(), 4)
        }
        (Family::C3 | Family::C4, Scenario::Only) => {
            (translation_row(true, 3.0, 1.0, 0.0, 3.0), 3)
        }
        (Family::C4, Scenario::LiouvilleAnalogue) => {
            let b = 3.0 * r.beta;
            (translation_row(true, b, -1.0, 1.0, b), 3)
        }
        (Family::D1 | Family::D2a | Family::D2b | Family::D3, Scenario::Homothety(k)) => {
            degenerate(fam, k, &r)?
        }
        (Family::Fs, Scenario::Only) => (fubini_study(), 16),
        (Family::Intro2dA, Scenario::Only) => (intro_a(), 2),
        (Family::Intro2dB, Scenario::Only) => {
            let mut f = intro_a();
            f.push(field2("y∂x + ½y²∂y", |x| {
                Ok([x[1].clone(), (&x[1] * &x[1]).scale(0.5)])
            }));
            (f, 3)
        }
        (Family::Intro2dFlat, Scenario::Only) => (intro_flat(), 8),
        _ => return bad("no such row"),
    };
    Ok(GeneratorSet {
        family: fam,
        scenario,
        spec: spec.clone(),
        fields,
        claimed_dim,
    })
}

fn l2_exceptional(r: &Resolved) -> bool {
    let rel = (r.c1 * r.d0).powi(2) - (r.c0 * r.d1).powi(2);
    r.beta == 0.0 || (r.eps == -1.0 && rel.abs() < 1e-12 * (1.0 + (r.c1 * r.d0).powi(2)))
}

fn c2_exceptional(r: &Resolved) -> bool {
    r.beta == 0.0 || r.vs0 == 0.0 || r.vs1 == 0.0
}

fn k(x: &[Jet], v: f64) -> Jet {
    Jet::constant(v, x[0].nvars(), x[0].order())
}

pub(crate) fn field4(
    label: impl Into<String>,
    f: impl Fn(&[Jet]) -> Result<[Jet; 4]> + Send + Sync + 'static,
) -> VectorFieldExpr {
    VectorFieldExpr::new(label, 4, move |x| Ok(f(x)?.to_vec()))
}

pub(crate) fn field2(
    label: impl Into<String>,
    f: impl Fn(&[Jet]) -> Result<[Jet; 2]> + Send + Sync + 'static,
) -> VectorFieldExpr {
    VectorFieldExpr::new(label, 2, move |x| Ok(f(x)?.to_vec()))
}

fn d_s0() -> VectorFieldExpr {
    VectorFieldExpr::coordinate("∂s0", 4, 2)
}

fn d_s1() -> VectorFieldExpr {
    VectorFieldExpr::coordinate("∂s1", 4, 3)
}

fn d_x0() -> VectorFieldExpr {
    VectorFieldExpr::coordinate("∂x0", 4, 0)
}

fn d_x1() -> VectorFieldExpr {
    VectorFieldExpr::coordinate("∂x1", 4, 1)
}

/// `T − (a s0 + b s1)∂s0 − (c s0 + d s1)∂s1` with `T = ∂x0 + ∂x1`
/// (Liouville) or `T = ∂z + ∂z̄ = ∂x0` (complex), plus `∂s0, ∂s1`.
fn translation_row(complex: bool, a: f64, b: f64, c: f64, d: f64) -> Vec<VectorFieldExpr> {
    let t = if complex { "∂z+∂z̄" } else { "∂x0+∂x1" };
    let label = format!("{t} − ({a}s0 + {b}s1)∂s0 − ({c}s0 + {d}s1)∂s1");
    let x1 = if complex { 0.0 } else { 1.0 };
    vec![
        field4(label, move |x| {
            Ok([
                k(x, 1.0),
                k(x, x1),
                -(&x[2].scale(a) + &x[3].scale(b)),
                -(&x[2].scale(c) + &x[3].scale(d)),
            ])
        }),
        d_s0(),
        d_s1(),
    ]
}

fn liouville_l1() -> Vec<VectorFieldExpr> {
    vec![
        field4("∂x0 + ∂x1 − s1∂s0", |x| {
            Ok([k(x, 1.0), k(x, 1.0), -&x[3], k(x, 0.0)])
        }),
        field4("x0∂x0 + x1∂x1 + 2s0∂s0 + s1∂s1", |x| {
            Ok([x[0].clone(), x[1].clone(), x[2].scale(2.0), x[3].clone()])
        }),
        d_s0(),
        d_s1(),
    ]
}

fn liouville_l2_generic(beta: f64) -> Vec<VectorFieldExpr> {
    translation_row(false, beta + 2.0, 0.0, 0.0, 2.0 * beta + 1.0)
}

/// The sign of `s1∂s0` in the second generator is `+`; with `−` the field
/// equations fail.
fn liouville_l2_exceptional(c0: f64, c1: f64) -> Vec<VectorFieldExpr> {
    let mut f = translation_row(false, 2.0, 0.0, 0.0, 1.0);
    f.insert(
        1,
        field4(
            format!("(1/{c0})e^x0 ∂x0 + (1/{c1})e^x1 ∂x1 + s1∂s0"),
            move |x| {
                Ok([
                    x[0].exp().scale(1.0 / c0),
                    x[1].exp().scale(1.0 / c1),
                    x[3].clone(),
                    k(x, 0.0),
                ])
            },
        ),
    );
    f
}

fn complex_c1() -> Vec<VectorFieldExpr> {
    vec![
        field4("∂z + ∂z̄ − s1∂s0", |x| {
            Ok([k(x, 1.0), k(x, 0.0), -&x[3], k(x, 0.0)])
        }),
        field4("z∂z + z̄∂z̄ + 2s0∂s0 + s1∂s1", |x| {
            Ok([x[0].clone(), x[1].clone(), x[2].scale(2.0), x[3].clone()])
        }),
        d_s0(),
        d_s1(),
    ]
}

/// `e^z ∂z + e^z̄ ∂z̄ = Re(e^z)∂x0 + Im(e^z)∂x1`.
fn complex_c2_exceptional() -> Vec<VectorFieldExpr> {
    let mut f = translation_row(true, 2.0, 0.0, 0.0, 1.0);
    f.insert(
        1,
        field4("e^z∂z + e^z̄∂z̄ + s1∂s0", |x| {
            let e = x[0].exp();
            Ok([&e * &x[1].cos(), &e * &x[1].sin(), x[3].clone(), k(x, 0.0)])
        }),
    );
    f
}

fn degenerate(fam: Family, scenario: u8, r: &Resolved) -> Result<(Vec<VectorFieldExpr>, usize)> {
    let bad = |msg: &str| {
        Err(Error::InvalidSpec(format!(
            "{fam} scenario {scenario}: {msg}"
        )))
    };
    let killing_lift = || {
        field4("s1∂x1 + ∂s0", |x| {
            Ok([k(x, 0.0), x[3].clone(), k(x, 1.0), k(x, 0.0)])
        })
    };
    match (fam, scenario, r.g) {
        (Family::D1 | Family::D2a, 1, GChoice::Generic) => {
            Ok((vec![d_x0(), d_x1(), killing_lift()], 3))
        }
        (Family::D1, 2, GChoice::Power { mu1, mu2, .. }) => Ok((
            vec![
                d_x0(),
                d_x1(),
                killing_lift(),
                field4(
                    format!("2x0∂x0 + 2x1∂x1 + {}s0∂s0 − ({mu1}s1 + {mu2})∂s1", mu1 + 2.0),
                    move |x| {
                        Ok([
                            x[0].scale(2.0),
                            x[1].scale(2.0),
                            x[2].scale(mu1 + 2.0),
                            -&x[3].scale(mu1).add_scalar(mu2),
                        ])
                    },
                ),
            ],
            4,
        )),
        (Family::D2a, 2, GChoice::Power { .. }) => Ok((vec![d_x0(), d_x1(), killing_lift()], 3)),
        (Family::D1 | Family::D2a, 3, GChoice::Quadratic { kappa, mu1, mu2 }) if kappa != 0.0 => {
            if fam == Family::D2a && (kappa * r.d1 * r.d1 - 9.0).abs() < 1e-12 {
                return bad("κ = 9/d1² gives constant HSC");
            }
            let mut f = vec![d_x0(), d_x1(), killing_lift()];
            f.extend(constant_curvature_lifts(kappa, mu1, mu2));
            Ok((f, 5))
        }
        (Family::D2a, 4, GChoice::Linear { mu1, mu2 }) if mu1 != 0.0 => {
            let mut f = vec![d_x0(), d_x1(), killing_lift()];
            f.extend(flat_d2a_lifts(mu1, mu2));
            Ok((f, 5))
        }
        (Family::D2b | Family::D3, 1, GChoice::Generic) => {
            let b = degenerate_rate(fam, r);
            Ok((
                vec![
                    field4(format!("∂x0 − {b}x1∂x1 + ∂s0"), move |x| {
                        Ok([k(x, 1.0), x[1].scale(-b), k(x, 1.0), k(x, 0.0)])
                    }),
                    d_x1(),
                ],
                2,
            ))
        }
        (Family::D2b | Family::D3, 2, GChoice::Sine { k1, k2, k3 }) => {
            let b = degenerate_rate(fam, r);
            let coef = k1 * k3 / (b * (k1 + b));
            Ok((
                vec![
                    d_x1(),
                    field4(format!("∂x0 − {b}x1∂x1 + ∂s0"), move |x| {
                        Ok([k(x, 1.0), x[1].scale(-b), k(x, 1.0), k(x, 0.0)])
                    }),
                    field4(
                        format!(
                            "{coef} e^(−{}s0) sin({k1}s1 + {k2})^(−{}) ∂x1 + e^(−{k1}s0)(cos(…)∂s0 − sin(…)∂s1)",
                            k1 + b,
                            (k1 + b) / k1
                        ),
                        move |x| {
                            let arg = x[3].scale(k1).add_scalar(k2);
                            let s = arg.sin();
                            let e = x[2].scale(-k1).exp();
                            let f = &x[2].scale(-(k1 + b)).exp() * &s.powf(-(k1 + b) / k1)?;
                            Ok([k(x, 0.0), f.scale(coef), &e * &arg.cos(), -&(&e * &s)])
                        },
                    ),
                ],
                3,
            ))
        }
        (Family::D2b | Family::D3, 3, GChoice::Exponential { k2: mu1, .. }) => {
            let b = degenerate_rate(fam, r);
            Ok((flat_conformal_lifts(b, mu1), 4))
        }
        _ => bad("G choice does not match the scenario"),
    }
}

/// `β + 2` for D2b and `3` for D3: `h = e^{−b s0} G (ds0² + ds1²)`.
fn degenerate_rate(fam: Family, r: &Resolved) -> f64 {
    if fam == Family::D3 {
        3.0
    } else {
        r.beta + 2.0
    }
}

/// The two non-trivial lifts of the Killing fields of
/// `h = G ds0² + ds1²/G`, `G = κ s1² + μ1 s1 + μ2`, by discriminant branch.
fn constant_curvature_lifts(kappa: f64, mu1: f64, mu2: f64) -> Vec<VectorFieldExpr> {
    let delta = mu1 * mu1 - 4.0 * kappa * mu2;
    let gq = move |x: &[Jet]| (&(&x[3] * &x[3]).scale(kappa) + &x[3].scale(mu1)).add_scalar(mu2);
    let gp = move |x: &[Jet]| x[3].scale(2.0 * kappa).add_scalar(mu1);
    if delta.abs() < 1e-12 {
        vec![
            field4("ξ1 lift (Δ = 0)", move |x| {
                let (s0, gp) = (&x[2], gp(x));
                let s0s = s0 * s0;
                let v1 = (&(&s0s * &gp).scale(0.5)) - &gp.recip()?.scale(2.0);
                let u0 = &s0s.scale(-kappa) + &(&gp * &gp).recip()?.scale(4.0 * kappa);
                Ok([k(x, 0.0), v1, u0, s0 * &gp])
            }),
            field4("ξ2 lift (Δ = 0)", move |x| {
                Ok([k(x, 0.0), k(x, 0.0), x[2].scale(-2.0 * kappa), gp(x)])
            }),
        ]
    } else if delta > 0.0 {
        let rd = delta.sqrt();
        vec![
            field4("ξ1 lift (Δ > 0)", move |x| {
                let (s0, sg) = (&x[2], gq(x).sqrt()?);
                let a = s0.scale(0.5 * rd);
                let (c, s) = (a.cos(), a.sin());
                let v1 = &sg * &(&c.scale(2.0 / rd) + &(s0 * &s));
                let u0 = &(&gp(x) * &c).try_div(&sg)?.scale(1.0 / rd);
                Ok([k(x, 0.0), v1, u0.clone(), &s * &sg])
            }),
            field4("ξ2 lift (Δ > 0)", move |x| {
                let (s0, sg) = (&x[2], gq(x).sqrt()?);
                let a = s0.scale(0.5 * rd);
                let (c, s) = (a.cos(), a.sin());
                let v1 = &sg * &(&(s0 * &c) - &s.scale(2.0 / rd));
                let u0 = (&gp(x) * &s).try_div(&sg)?.scale(-1.0 / rd);
                Ok([k(x, 0.0), v1, u0, &c * &sg])
            }),
        ]
    } else {
        let rd = (-delta).sqrt();
        vec![
            field4("ξ1 lift (Δ < 0)", move |x| {
                let (s0, sg) = (&x[2], gq(x).sqrt()?);
                let e = s0.scale(0.5 * rd).exp();
                let v1 = &(&(s0.add_scalar(-2.0 / rd)) * &sg) * &e;
                let u0 = (&gp(x) * &e).try_div(&sg)?.scale(-1.0 / rd);
                Ok([k(x, 0.0), v1, u0, &e * &sg])
            }),
            field4("ξ2 lift (Δ < 0)", move |x| {
                let (s0, sg) = (&x[2], gq(x).sqrt()?);
                let e = s0.scale(-0.5 * rd).exp();
                let v1 = &(&(s0.add_scalar(2.0 / rd)) * &sg) * &e;
                let u0 = (&gp(x) * &e).try_div(&sg)?.scale(1.0 / rd);
                Ok([k(x, 0.0), v1, u0, &e * &sg])
            }),
        ]
    }
}

/// The two lifted rotations of the flat `h` with `G = μ1 s1 + μ2` (D2a).
fn flat_d2a_lifts(mu1: f64, mu2: f64) -> Vec<VectorFieldExpr> {
    let parts = move |x: &[Jet]| -> Result<(Jet, Jet, Jet, Jet)> {
        let a = x[2].scale(0.5 * mu1);
        let sg = x[3].scale(mu1).add_scalar(mu2).sqrt()?;
        Ok((a.cos(), a.sin(), sg, x[2].scale(mu1)))
    };
    vec![
        field4("ξ1 lift (flat h)", move |x| {
            let (c, s, sg, m) = parts(x)?;
            let v1 = &(&(&m * &s) + &c.scale(2.0)) * &sg;
            Ok([k(x, 0.0), v1, c.try_div(&sg)?.scale(mu1), (&s * &sg).scale(mu1)])
        }),
        field4("ξ2 lift (flat h)", move |x| {
            let (c, s, sg, m) = parts(x)?;
            let v1 = &(&(&m * &c) - &s.scale(2.0)) * &sg;
            Ok([k(x, 0.0), v1, s.try_div(&sg)?.scale(-mu1), (&c * &sg).scale(mu1)])
        }),
    ]
}

/// D2b/D3 with flat `h = e^{−b s0 + μ1 s1}(ds0² + ds1²)`.
fn flat_conformal_lifts(b: f64, mu1: f64) -> Vec<VectorFieldExpr> {
    let den = (b * b + mu1 * mu1) * b;
    let parts = move |x: &[Jet]| {
        let w = &x[3].scale(0.5 * b) + &x[2].scale(0.5 * mu1);
        let e_u = (&x[2].scale(0.5 * b) - &x[3].scale(0.5 * mu1)).exp();
        let e_v = (&x[3].scale(0.5 * mu1) - &x[2].scale(0.5 * b)).exp();
        (w.cos(), w.sin(), e_u, e_v)
    };
    vec![
        field4(format!("∂x0 − {b}x1∂x1 + ∂s0"), move |x| {
            Ok([k(x, 1.0), x[1].scale(-b), k(x, 1.0), k(x, 0.0)])
        }),
        d_x1(),
        field4(format!("{mu1}∂s0 + {b}∂s1"), move |x| {
            Ok([k(x, 0.0), k(x, 0.0), k(x, mu1), k(x, b)])
        }),
        field4("ξ2 lift (flat h)", move |x| {
            let (c, s, eu, ev) = parts(x);
            let v1 = &ev * &(&s.scale(2.0 * mu1 * b) - &c.scale(b * b - mu1 * mu1)).scale(1.0 / den);
            Ok([k(x, 0.0), v1, &eu * &s, -&(&eu * &c)])
        }),
        field4("ξ3 lift (flat h)", move |x| {
            let (c, s, eu, ev) = parts(x);
            let v1 = &ev * &(&c.scale(2.0 * mu1 * b) - &s.scale(mu1 * mu1 - b * b)).scale(1.0 / den);
            Ok([k(x, 0.0), v1, &eu * &c, &eu * &s])
        }),
    ]
}

/// The 16 fields of `sl(3, C)` on `(x, y, s, t)`, `z1 = x + iy`, `z2 = s + it`.
fn fubini_study() -> Vec<VectorFieldExpr> {
    type C = fn(&[Jet]) -> [Jet; 4];
    let table: [(&str, C); 16] = [
        ("(x²−y²)∂x + 2xy∂y + (xs−yt)∂s + (xt+ys)∂t", |v| {
            let (x, y, s, t) = (&v[0], &v[1], &v[2], &v[3]);
            [&(x * x) - &(y * y), (x * y).scale(2.0), &(x * s) - &(y * t), &(x * t) + &(y * s)]
        }),
        ("y∂x − x∂y", |v| [v[1].clone(), -&v[0], k(v, 0.0), k(v, 0.0)]),
        ("x∂x + y∂y", |v| [v[0].clone(), v[1].clone(), k(v, 0.0), k(v, 0.0)]),
        ("∂x", |v| [k(v, 1.0), k(v, 0.0), k(v, 0.0), k(v, 0.0)]),
        ("−2xy∂x + (x²−y²)∂y − (xt+ys)∂s + (xs−yt)∂t", |v| {
            let (x, y, s, t) = (&v[0], &v[1], &v[2], &v[3]);
            [(x * y).scale(-2.0), &(x * x) - &(y * y), -&(&(x * t) + &(y * s)), &(x * s) - &(y * t)]
        }),
        ("y∂s − x∂t", |v| [k(v, 0.0), k(v, 0.0), v[1].clone(), -&v[0]]),
        ("x∂s + y∂t", |v| [k(v, 0.0), k(v, 0.0), v[0].clone(), v[1].clone()]),
        ("∂y", |v| [k(v, 0.0), k(v, 1.0), k(v, 0.0), k(v, 0.0)]),
        ("−(xt+ys)∂x + (xs−yt)∂y − 2st∂s + (s²−t²)∂t", |v| {
            let (x, y, s, t) = (&v[0], &v[1], &v[2], &v[3]);
            [-&(&(x * t) + &(y * s)), &(x * s) - &(y * t), (s * t).scale(-2.0), &(s * s) - &(t * t)]
        }),
        ("t∂s − s∂t", |v| [k(v, 0.0), k(v, 0.0), v[3].clone(), -&v[2]]),
        ("s∂s + t∂t", |v| [k(v, 0.0), k(v, 0.0), v[2].clone(), v[3].clone()]),
        ("∂s", |v| [k(v, 0.0), k(v, 0.0), k(v, 1.0), k(v, 0.0)]),
        ("(xs−yt)∂x + (xt+ys)∂y + (s²−t²)∂s + 2st∂t", |v| {
            let (x, y, s, t) = (&v[0], &v[1], &v[2], &v[3]);
            [&(x * s) - &(y * t), &(x * t) + &(y * s), &(s * s) - &(t * t), (s * t).scale(2.0)]
        }),
        ("t∂x − s∂y", |v| [v[3].clone(), -&v[2], k(v, 0.0), k(v, 0.0)]),
        ("s∂x + t∂y", |v| [v[2].clone(), v[3].clone(), k(v, 0.0), k(v, 0.0)]),
        ("∂t", |v| [k(v, 0.0), k(v, 0.0), k(v, 0.0), k(v, 1.0)]),
    ];
    table
        .into_iter()
        .map(|(label, f)| field4(label, move |x| Ok(f(x))))
        .collect()
}

fn intro_a() -> Vec<VectorFieldExpr> {
    vec![
        VectorFieldExpr::coordinate("∂y", 2, 1),
        field2("∂x + y∂y", |x| Ok([k(x, 1.0), x[1].clone()])),
    ]
}

fn intro_flat() -> Vec<VectorFieldExpr> {
    type C = fn(&[Jet]) -> [Jet; 2];
    let table: [(&str, C); 8] = [
        ("∂x", |v| [k(v, 1.0), k(v, 0.0)]),
        ("∂y", |v| [k(v, 0.0), k(v, 1.0)]),
        ("x∂x", |v| [v[0].clone(), k(v, 0.0)]),
        ("x∂y", |v| [k(v, 0.0), v[0].clone()]),
        ("y∂x", |v| [v[1].clone(), k(v, 0.0)]),
        ("y∂y", |v| [k(v, 0.0), v[1].clone()]),
        ("x²∂x + xy∂y", |v| [&v[0] * &v[0], &v[0] * &v[1]]),
        ("xy∂x + y²∂y", |v| [&v[0] * &v[1], &v[1] * &v[1]]),
    ];
    table
        .into_iter()
        .map(|(label, f)| field2(label, move |x| Ok(f(x))))
        .collect()
}
