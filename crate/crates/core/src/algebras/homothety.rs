//! Homotheties of the 2D metrics `h` and their lifts to c-projective fields
//! of the degenerate families.

use serde::{Deserialize, Serialize};

use super::bracket::seeded_point;
use super::catalog::field2;
use super::VectorFieldExpr;
use crate::error::{Error, Result};
use crate::families::{g_function, CaseSpec, Family, Resolved};
use crate::geometry::{lie_derivative, Tensor};
use crate::jet::Jet;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomothetyFit {
    /// Fitted `C` in `L_u h = C h`.
    pub c: f64,
    /// Largest `|L_u h − C h|`, relative to `1 + max |L_u h|`.
    pub residual: f64,
}

/// Fit one constant `C` with `L_u h = C h` over `points`; `h_at` builds the
/// 2×2 metric as a jet tensor of the requested order at a point.
pub fn homothety_residual(
    h_at: impl Fn([f64; 2], usize) -> Result<Tensor>,
    u: &VectorFieldExpr,
    points: &[[f64; 2]],
) -> Result<HomothetyFit> {
    let mut lu = Vec::new();
    let mut hv = Vec::new();
    for p in points {
        let h = h_at(*p, 2)?;
        let uj = u.at(p, 2)?;
        lu.extend(lie_derivative(&uj, &h)?.values());
        hv.extend(h.values());
    }
    let hh: f64 = hv.iter().map(|x| x * x).sum();
    if hh == 0.0 {
        return Err(Error::Singular("h vanishes at every point".into()));
    }
    let c = lu.iter().zip(&hv).map(|(a, b)| a * b).sum::<f64>() / hh;
    let scale = 1.0 + lu.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let residual = lu
        .iter()
        .zip(&hv)
        .fold(0.0_f64, |m, (a, b)| m.max((a - c * b).abs()))
        / scale;
    Ok(HomothetyFit { c, residual })
}

/// `h` of a degenerate case, as a closure for [`homothety_residual`].
pub fn degenerate_h_at(spec: &CaseSpec) -> impl Fn([f64; 2], usize) -> Result<Tensor> + '_ {
    move |s, order| crate::families::degenerate_h(spec, s, order)
}

fn k(x: &[Jet], v: f64) -> Jet {
    Jet::constant(v, x[0].nvars(), x[0].order())
}

/// Homotheties of `G ds0² + ds1²/G` for `G = κ s1² + μ1 s1 + μ2`, `κ ≠ 0`:
/// `∂s0` and the two further Killing fields of the discriminant branch.
pub fn quadratic_homotheties(kappa: f64, mu1: f64, mu2: f64) -> Vec<VectorFieldExpr> {
    let delta = mu1 * mu1 - 4.0 * kappa * mu2;
    let gq = move |s1: &Jet| (&(s1 * s1).scale(kappa) + &s1.scale(mu1)).add_scalar(mu2);
    let gp = move |s1: &Jet| s1.scale(2.0 * kappa).add_scalar(mu1);
    let mut out = vec![VectorFieldExpr::coordinate("∂s0", 2, 0)];
    if delta.abs() < 1e-12 {
        out.push(field2("(−κs0² + 4κ/G'²)∂s0 + s0G'∂s1", move |x| {
            let g1 = gp(&x[1]);
            let u0 = &(&x[0] * &x[0]).scale(-kappa) + &(&g1 * &g1).recip()?.scale(4.0 * kappa);
            Ok([u0, &x[0] * &g1])
        }));
        out.push(field2("−2κs0∂s0 + G'∂s1", move |x| {
            Ok([x[0].scale(-2.0 * kappa), gp(&x[1])])
        }));
    } else if delta > 0.0 {
        let rd = delta.sqrt();
        out.push(field2("G'cos(½√Δ s0)/(√G√Δ)∂s0 + √G sin(½√Δ s0)∂s1", move |x| {
            let sg = gq(&x[1]).sqrt()?;
            let a = x[0].scale(0.5 * rd);
            let u0 = (&gp(&x[1]) * &a.cos()).try_div(&sg)?.scale(1.0 / rd);
            Ok([u0, &a.sin() * &sg])
        }));
        out.push(field2("−G'sin(½√Δ s0)/(√G√Δ)∂s0 + √G cos(½√Δ s0)∂s1", move |x| {
            let sg = gq(&x[1]).sqrt()?;
            let a = x[0].scale(0.5 * rd);
            let u0 = (&gp(&x[1]) * &a.sin()).try_div(&sg)?.scale(-1.0 / rd);
            Ok([u0, &a.cos() * &sg])
        }));
    } else {
        let rd = (-delta).sqrt();
        for sign in [1.0, -1.0] {
            let label = if sign > 0.0 {
                "−G'e^(½√−Δ s0)/(√G√−Δ)∂s0 + √G e^(½√−Δ s0)∂s1"
            } else {
                "G'e^(−½√−Δ s0)/(√G√−Δ)∂s0 + √G e^(−½√−Δ s0)∂s1"
            };
            out.push(field2(label, move |x| {
                let sg = gq(&x[1]).sqrt()?;
                let e = x[0].scale(0.5 * sign * rd).exp();
                let u0 = (&gp(&x[1]) * &e).try_div(&sg)?.scale(-sign / rd);
                Ok([u0, &e * &sg])
            }));
        }
    }
    out
}

/// Homotheties of the flat `G ds0² + ds1²/G`, `G = μ1 s1 + μ2`: the proper
/// homothety `(μ1 s1 + μ2)∂s1` first, then three Killing fields.
pub fn linear_homotheties(mu1: f64, mu2: f64) -> Vec<VectorFieldExpr> {
    let parts = move |x: &[Jet]| -> Result<(Jet, Jet, Jet)> {
        let a = x[0].scale(0.5 * mu1);
        Ok((a.sin(), a.cos(), x[1].scale(mu1).add_scalar(mu2).sqrt()?))
    };
    vec![
        field2(format!("({mu1}s1 + {mu2})∂s1"), move |x| {
            Ok([k(x, 0.0), x[1].scale(mu1).add_scalar(mu2)])
        }),
        VectorFieldExpr::coordinate("∂s0", 2, 0),
        field2("sin(½μ1 s0)/√G ∂s0 − cos(½μ1 s0)√G ∂s1", move |x| {
            let (s, c, sg) = parts(x)?;
            Ok([s.try_div(&sg)?, -&(&c * &sg)])
        }),
        field2("cos(½μ1 s0)/√G ∂s0 + sin(½μ1 s0)√G ∂s1", move |x| {
            let (s, c, sg) = parts(x)?;
            Ok([c.try_div(&sg)?, &s * &sg])
        }),
    ]
}

/// The proper homothety `(k1 + 2)s0∂s0 − (k1 s1 + k2)∂s1` of
/// `G ds0² + ds1²/G` with `G = k3 (k1 s1 + k2)^{2(k1+1)/k1}`.
pub fn power_homothety(k1: f64, k2: f64) -> VectorFieldExpr {
    field2(format!("{}s0∂s0 − ({k1}s1 + {k2})∂s1", k1 + 2.0), move |x| {
        Ok([x[0].scale(k1 + 2.0), -&x[1].scale(k1).add_scalar(k2)])
    })
}

/// The Killing field `e^{−k1 s0}(cos(k1 s1 + k2)∂s0 − sin(k1 s1 + k2)∂s1)` of
/// `e^{λ s0} k3 sin(k1 s1 + k2)^{(λ − 2k1)/k1}(ds0² + ds1²)`.
pub fn sine_killing(k1: f64, k2: f64) -> VectorFieldExpr {
    field2(format!("e^(−{k1}s0)(cos({k1}s1 + {k2})∂s0 − sin(…)∂s1)"), move |x| {
        let e = x[0].scale(-k1).exp();
        let a = x[1].scale(k1).add_scalar(k2);
        Ok([&e * &a.cos(), -&(&e * &a.sin())])
    })
}

/// Homotheties of the flat `e^{−b s0 + μ1 s1}(ds0² + ds1²)`: `∂s0`, the
/// Killing translation `μ1∂s0 + b∂s1` and the two Killing rotations.
pub fn flat_conformal_homotheties(b: f64, mu1: f64) -> Vec<VectorFieldExpr> {
    let parts = move |x: &[Jet]| {
        let w = &x[1].scale(0.5 * b) + &x[0].scale(0.5 * mu1);
        let e = (&x[0].scale(0.5 * b) - &x[1].scale(0.5 * mu1)).exp();
        (w.cos(), w.sin(), e)
    };
    vec![
        VectorFieldExpr::coordinate("∂s0", 2, 0),
        field2(format!("{mu1}∂s0 + {b}∂s1"), move |x| Ok([k(x, mu1), k(x, b)])),
        field2("e^(½b s0 − ½μ1 s1)(sin w ∂s0 − cos w ∂s1)", move |x| {
            let (c, s, e) = parts(x);
            Ok([&e * &s, -&(&e * &c)])
        }),
        field2("e^(½b s0 − ½μ1 s1)(cos w ∂s0 + sin w ∂s1)", move |x| {
            let (c, s, e) = parts(x);
            Ok([&e * &c, &e * &s])
        }),
    ]
}

/// `v⁰` and `η` of a lift, as stated per family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftRow {
    /// `v⁰ = a x0 + b` (D1, D2a, D2b, D3).
    pub v0_linear: f64,
    pub v0_const: f64,
    pub eta: f64,
}

/// `v⁰` and `η` for a homothety constant `C`.
///
/// D1: `v⁰ = C x0`, `η = C`. D2a: `v⁰ = 0`, `η = 0`, and `C` must vanish.
/// D2b: `v⁰ = −C/(β+2)`, `η = C`. D3: `v⁰ = −C/3`, `η = C`.
pub fn lift_row(family: Family, r: &Resolved, c: f64) -> Result<LiftRow> {
    Ok(match family {
        Family::D1 => LiftRow {
            v0_linear: c,
            v0_const: 0.0,
            eta: c,
        },
        Family::D2a => LiftRow {
            v0_linear: 0.0,
            v0_const: 0.0,
            eta: 0.0,
        },
        Family::D2b => LiftRow {
            v0_linear: 0.0,
            v0_const: -c / (r.beta + 2.0),
            eta: c,
        },
        Family::D3 => LiftRow {
            v0_linear: 0.0,
            v0_const: -c / 3.0,
            eta: c,
        },
        _ => {
            return Err(Error::InvalidSpec(format!(
                "{family} is not a degenerate family"
            )))
        }
    })
}

/// `τ = τ1 ds1` with `dτ` the area form of `h`.
fn tau1(family: Family, r: &Resolved, s0: &Jet, s1: &Jet) -> Result<Jet> {
    match family {
        Family::D1 | Family::D2a => Ok(s0.clone()),
        Family::D2b | Family::D3 => {
            let lambda = if family == Family::D3 { -3.0 } else { -(r.beta + 2.0) };
            let g = g_function(r.g, lambda, s1)?;
            Ok((&s0.scale(lambda).exp() * &g).scale(1.0 / lambda))
        }
        _ => Err(Error::InvalidSpec(format!("{family} is not a degenerate family"))),
    }
}

/// The partials `(∂f/∂s0, ∂f/∂s1)` of `df = L_u τ − η τ` at coordinate jets
/// `(s0, s1)` of order `k + 1` (variables `i0`, `i1`); returned at order `k`.
fn f_partials(
    family: Family,
    r: &Resolved,
    u: &VectorFieldExpr,
    eta: f64,
    s: [&Jet; 2],
    idx: [usize; 2],
) -> Result<(Jet, Jet)> {
    let ord = s[0].order() - 1;
    let uj = u.eval(&[s[0].clone(), s[1].clone()])?;
    let t = tau1(family, r, s[0], s[1])?;
    let du1_0 = uj[1].derivative(idx[0])?;
    let du1_1 = uj[1].derivative(idx[1])?;
    let dt0 = t.derivative(idx[0])?;
    let dt1 = t.derivative(idx[1])?;
    let (t, u0, u1) = (t.truncate(ord), uj[0].truncate(ord), uj[1].truncate(ord));
    let p = &t * &du1_0;
    let q = &(&(&u0 * &dt0) + &(&u1 * &dt1)) + &(&(&t * &du1_1) - &t.scale(eta));
    Ok((p, q))
}

/// `(∂f/∂s0, ∂f/∂s1)` values at `(s0, s1)`.
fn f_partial_values(
    family: Family,
    r: &Resolved,
    u: &VectorFieldExpr,
    eta: f64,
    s: [f64; 2],
) -> Result<(f64, f64)> {
    let x = Jet::seed_point(&s, 1)?;
    let (p, q) = f_partials(family, r, u, eta, [&x[0], &x[1]], [0, 1])?;
    Ok((p.value(), q.value()))
}

/// Largest `|∂_{s1}(∂f/∂s0) − ∂_{s0}(∂f/∂s1)|` over `points`, relative to the
/// largest of the two terms.
pub fn lift_integrability(
    family: Family,
    r: &Resolved,
    u: &VectorFieldExpr,
    eta: f64,
    points: &[[f64; 2]],
) -> Result<f64> {
    let mut worst = 0.0_f64;
    for s in points {
        let x = Jet::seed_point(s, 2)?;
        let (p, q) = f_partials(family, r, u, eta, [&x[0], &x[1]], [0, 1])?;
        let (a, b) = (p.gradient()[1], q.gradient()[0]);
        worst = worst.max((a - b).abs() / (1.0 + a.abs().max(b.abs())));
    }
    Ok(worst)
}

/// Largest panel of the path quadrature.
const MAX_STEP: f64 = 1e-3;

/// `∫_a^b φ` by two-point Gauss-Legendre on panels no wider than `MAX_STEP`.
fn integrate(a: f64, b: f64, phi: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let n = ((b - a).abs() / MAX_STEP).ceil().max(1.0) as usize;
    let h = (b - a) / n as f64;
    let off = 0.5 * h / 3f64.sqrt();
    let mut acc = 0.0;
    for i in 0..n {
        let mid = a + (i as f64 + 0.5) * h;
        acc += phi(mid - off)? + phi(mid + off)?;
    }
    Ok(acc * 0.5 * h)
}

/// `f(s0, s1)` from `f(0, 0) = 0`, integrating along `(0,0) → (0,s1) → (s0,s1)`.
fn integrate_f(family: Family, r: &Resolved, u: &VectorFieldExpr, eta: f64, s: [f64; 2]) -> Result<f64> {
    let leg1 = integrate(0.0, s[1], |t| Ok(f_partial_values(family, r, u, eta, [0.0, t])?.1))?;
    let leg2 = integrate(0.0, s[0], |t| Ok(f_partial_values(family, r, u, eta, [t, s[1]])?.0))?;
    Ok(leg1 + leg2)
}

/// Lift a homothety `u` of `h` with `L_u h = C h` to
/// `v = v⁰∂x0 + (η x1 + f)∂x1 + u`, with `df = L_u τ − η τ`.
///
/// Fails with [`Error::LiftObstructed`] when `df` is not closed at the
/// sample points or, for D2a, when `C ≠ 0`.
pub fn lift_homothety(
    spec: &CaseSpec,
    u: &VectorFieldExpr,
    c: f64,
    points: &[[f64; 2]],
    tol: f64,
) -> Result<VectorFieldExpr> {
    let family = spec.family;
    let r = spec.validate()?;
    let row = lift_row(family, &r, c)?;
    if family == Family::D2a && c.abs() > tol {
        return Err(Error::LiftObstructed(c.abs()));
    }
    let integrability = lift_integrability(family, &r, u, row.eta, points)?;
    if integrability > tol {
        return Err(Error::LiftObstructed(integrability));
    }
    let u = u.clone();
    let label = format!("lift of {}", u.label);
    Ok(VectorFieldExpr::new(label, 4, move |x| {
        let p = seeded_point(x)?;
        let ord = x[0].order();
        let value = integrate_f(family, &r, &u, row.eta, [p[2], p[3]])?;
        let f = if ord == 0 {
            Jet::constant(value, 4, 0)
        } else {
            let hi = Jet::seed_point(&p, ord)?;
            let (pp, qq) = f_partials(family, &r, &u, row.eta, [&hi[2], &hi[3]], [2, 3])?;
            antiderivative(value, &pp, &qq, ord)?
        };
        let uj = u.eval(&[x[2].clone(), x[3].clone()])?;
        let v0 = x[0].scale(row.v0_linear).add_scalar(row.v0_const);
        let v1 = &x[1].scale(row.eta) + &f;
        Ok(vec![v0, v1, uj[0].clone(), uj[1].clone()])
    }))
}

/// The order-`ord` jet in `(x0, x1, s0, s1)` of a function of `(s0, s1)`
/// with the given value and partial jets `∂_{s0} = p`, `∂_{s1} = q` (order
/// `ord − 1`).
fn antiderivative(value: f64, p: &Jet, q: &Jet, ord: usize) -> Result<Jet> {
    let proto = Jet::zero(4, ord);
    let mut coeffs = vec![0.0; proto.coeffs().len()];
    for (pos, mi) in proto.multi_indices().iter().enumerate() {
        let a = mi.0;
        if pos == 0 {
            coeffs[0] = value;
        } else if a[0] > 0 || a[1] > 0 {
            continue;
        } else if a[2] > 0 {
            let lower = [0, 0, a[2] as usize - 1, a[3] as usize];
            coeffs[pos] = p.coeff(&lower)? / a[2] as f64;
        } else {
            let lower = [0, 0, 0, a[3] as usize - 1];
            coeffs[pos] = q.coeff(&lower)? / a[3] as f64;
        }
    }
    Jet::from_taylor_coeffs(4, ord, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_is_exact_for_cubics() {
        let v = integrate(0.0, 1.3, |t| Ok(t * t * t - 2.0 * t)).unwrap();
        let exact = 1.3f64.powi(4) / 4.0 - 1.3f64.powi(2);
        assert!((v - exact).abs() < 1e-13);
    }

    #[test]
    fn antiderivative_matches_a_polynomial() {
        // f = s0² s1 + 3 s1 at (s0, s1) = (0.4, -0.2)
        let x = Jet::seed_point(&[0.0, 0.0, 0.4, -0.2], 3).unwrap();
        let f = &(&(&x[2] * &x[2]) * &x[3]) + &x[3].scale(3.0);
        let p = f.derivative(2).unwrap();
        let q = f.derivative(3).unwrap();
        let g = antiderivative(f.value(), &p, &q, 3).unwrap();
        for (a, b) in g.coeffs().iter().zip(f.coeffs()) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
