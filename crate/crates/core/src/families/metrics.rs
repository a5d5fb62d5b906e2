//! Jet-valued metrics and Kähler forms of every family, their companion
//! metrics and the pencil built from a pair.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::forms::{ComplexForms, RealForms};
use super::profiles::{complex_profile, degenerate_h_data, degenerate_profile, liouville_profile};
use super::spec::{CaseSpec, Family, Intro2d, Resolved};
use super::Point;
use crate::error::{Error, Result};
use crate::geometry::{MetricFrame, Tensor};
use crate::jet::{ComplexJet, Jet};
use crate::linalg;

const N: usize = 4;

/// Sign of the first term of the complex-type metric.
///
/// The printed form `¼(ρ̄−ρ)(F²dz² − F̄²dz̄²)` pairs with the printed Kähler
/// form only up to `J² = +Id`; flipping it to `¼(ρ−ρ̄)(…)` gives a Kähler
/// metric.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComplexSign {
    #[default]
    Corrected,
    Printed,
}

/// A constructed frame plus the imaginary residue of the complex assembly
/// (zero for real families).
#[derive(Clone, Debug)]
pub struct FrameBuild {
    pub frame: MetricFrame,
    pub imag_residual: f64,
}

fn seed(p: &Point, order: usize) -> Result<Vec<Jet>> {
    Jet::seed_point(p, order)
}

fn covector(c: [Jet; 4]) -> Vec<Jet> {
    c.to_vec()
}

fn tensor02(m: Vec<Jet>) -> Result<Tensor> {
    Tensor::from_matrix(0, 2, N, m)
}

/// `g` and `ω` of the family at `p`, with the default complex sign.
pub fn build_frame(spec: &CaseSpec, p: &Point, order: usize) -> Result<MetricFrame> {
    Ok(build_frame_with(spec, p, order, ComplexSign::Corrected)?.frame)
}

pub fn build_frame_with(
    spec: &CaseSpec,
    p: &Point,
    order: usize,
    sign: ComplexSign,
) -> Result<FrameBuild> {
    let r = spec.validate()?;
    let fam = spec.family;
    let x = seed(p, order)?;
    let real = |frame| FrameBuild {
        frame,
        imag_residual: 0.0,
    };
    if fam.is_liouville() {
        liouville_frame(fam, &r, &x).map(real)
    } else if fam.is_complex() {
        complex_frame(fam, &r, &x, sign)
    } else if fam.is_degenerate() {
        degenerate_frame(fam, &r, &x).map(real)
    } else if fam.is_constant_hsc_model() {
        model_frame(fam, &r, &x)
    } else {
        Err(Error::InvalidSpec(format!(
            "{fam} is two-dimensional; use intro_2d_metric"
        )))
    }
}

fn liouville_frame(fam: Family, r: &Resolved, x: &[Jet]) -> Result<MetricFrame> {
    let (nv, ord) = (x[0].nvars(), x[0].order());
    let p0 = liouville_profile(fam, r, 0, &x[0])?;
    let p1 = liouville_profile(fam, r, 1, &x[1])?;
    let zero = Jet::zero(nv, ord);
    let one = Jet::constant(1.0, nv, ord);
    let dx0 = covector([one.clone(), zero.clone(), zero.clone(), zero.clone()]);
    let dx1 = covector([zero.clone(), one.clone(), zero.clone(), zero.clone()]);
    let a = covector([zero.clone(), zero.clone(), one.clone(), p1.rho.clone()]);
    let b = covector([zero.clone(), zero, one, p0.rho.clone()]);

    let diff = &p0.rho - &p1.rho;
    let inv_diff = diff.recip()?;
    let q0 = p0.drho.try_div(&p0.f)?;
    let q1 = p1.drho.try_div(&p1.f)?;

    let mut g = RealForms::new(N, nv, ord);
    g.sym(&(&diff * &(&p0.f * &p0.f)), &dx0, &dx0);
    g.sym(&(&diff * &(&p1.f * &p1.f)).scale(r.eps), &dx1, &dx1);
    g.sym(&(&inv_diff * &(&q0 * &q0)), &a, &a);
    g.sym(&(&inv_diff * &(&q1 * &q1)).scale(r.eps), &b, &b);

    let mut w = RealForms::new(N, nv, ord);
    w.wedge(&p0.drho, &dx0, &a);
    w.wedge(&p1.drho, &dx1, &b);
    MetricFrame::from_metric_and_form(tensor02(g.finish())?, tensor02(w.finish())?)
}

fn complex_frame(fam: Family, r: &Resolved, x: &[Jet], sign: ComplexSign) -> Result<FrameBuild> {
    let (nv, ord) = (x[0].nvars(), x[0].order());
    let cz = |v: Complex64| ComplexJet::constant(v, nv, ord);
    let zero = cz(Complex64::new(0.0, 0.0));
    let one = cz(Complex64::new(1.0, 0.0));
    let i = cz(Complex64::new(0.0, 1.0));
    let z = ComplexJet::new(x[0].clone(), x[1].clone())?;
    let pr = complex_profile(fam, r, &z)?;
    let (rho, rhob) = (pr.rho.clone(), pr.rho.conj());
    let (drho, drhob) = (pr.drho.clone(), pr.drho.conj());
    let (f, fb) = (pr.f.clone(), pr.f.conj());

    let dz = vec![one.clone(), i.clone(), zero.clone(), zero.clone()];
    let dzb = vec![one.clone(), -&i, zero.clone(), zero.clone()];
    let a = vec![zero.clone(), zero.clone(), one.clone(), rhob.clone()];
    let b = vec![zero.clone(), zero, one, rho.clone()];

    let diff = &rho - &rhob;
    let quarter = match sign {
        ComplexSign::Corrected => diff.scale(Complex64::new(0.25, 0.0)),
        ComplexSign::Printed => diff.scale(Complex64::new(-0.25, 0.0)),
    };
    let four_over = diff.recip()?.scale(Complex64::new(4.0, 0.0));
    let q = drho.try_div(&f)?;
    let qb = drhob.try_div(&fb)?;

    let mut g = ComplexForms::new(N, nv, ord);
    g.sym(&(&quarter * &(&f * &f)), &dz, &dz);
    g.sym(&-&(&quarter * &(&fb * &fb)), &dzb, &dzb);
    g.sym(&(&four_over * &(&q * &q)), &a, &a);
    g.sym(&-&(&four_over * &(&qb * &qb)), &b, &b);

    let mut w = ComplexForms::new(N, nv, ord);
    w.wedge(&drho, &dz, &a);
    w.wedge(&drhob, &dzb, &b);
    let (gm, gi) = g.finish();
    let (wm, wi) = w.finish();
    Ok(FrameBuild {
        frame: MetricFrame::from_metric_and_form(tensor02(gm)?, tensor02(wm)?)?,
        imag_residual: gi.max(wi),
    })
}

fn degenerate_frame(fam: Family, r: &Resolved, x: &[Jet]) -> Result<MetricFrame> {
    let (nv, ord) = (x[0].nvars(), x[0].order());
    let pr = degenerate_profile(fam, r, &x[0])?;
    let h = degenerate_h_data(fam, r, &x[2], &x[3])?;
    let zero = Jet::zero(nv, ord);
    let one = Jet::constant(1.0, nv, ord);
    let dx0 = covector([one.clone(), zero.clone(), zero.clone(), zero.clone()]);
    let ds0 = covector([zero.clone(), zero.clone(), one.clone(), zero.clone()]);
    let ds1 = covector([zero.clone(), zero.clone(), zero.clone(), one.clone()]);
    let theta = covector([zero.clone(), one, zero.clone(), -&h.tau1]);

    let q = pr.drho.try_div(&pr.f)?;
    let mut g = RealForms::new(N, nv, ord);
    g.sym(&-&(&pr.rho * &h.h00), &ds0, &ds0);
    g.sym(&-&(&pr.rho * &h.h11), &ds1, &ds1);
    g.sym(&(&pr.rho * &(&pr.f * &pr.f)), &dx0, &dx0);
    g.sym(&(&q * &q).try_div(&pr.rho)?, &theta, &theta);

    let mut w = RealForms::new(N, nv, ord);
    w.wedge(&-&(&pr.rho * &h.area), &ds0, &ds1);
    w.wedge(&pr.drho, &dx0, &theta);
    MetricFrame::from_metric_and_form(tensor02(g.finish())?, tensor02(w.finish())?)
}

/// Standard complex structure on `(x, y, s, t)` with `z₁ = x+iy`, `z₂ = s+it`.
fn standard_j(nv: usize, ord: usize) -> Result<Tensor> {
    let mut m = vec![Jet::zero(nv, ord); N * N];
    for k in [0, 2] {
        m[(k + 1) * N + k] = Jet::constant(1.0, nv, ord);
        m[k * N + k + 1] = Jet::constant(-1.0, nv, ord);
    }
    Tensor::from_matrix(1, 1, N, m)
}

/// The constant-HSC model metrics `Σ H_ji dz_j dz̄_i` with hermitian `H`.
fn model_frame(fam: Family, r: &Resolved, x: &[Jet]) -> Result<FrameBuild> {
    let (nv, ord) = (x[0].nvars(), x[0].order());
    let cz = |v: f64| ComplexJet::constant(Complex64::new(v, 0.0), nv, ord);
    let zs = [
        ComplexJet::new(x[0].clone(), x[1].clone())?,
        ComplexJet::new(x[2].clone(), x[3].clone())?,
    ];
    let (eps, factor, sigma) = match fam {
        Family::Fs => ([1.0, 1.0], 1.0, 1.0),
        Family::FsModified => ([r.eps1, r.eps2], 4.0 / r.kappa, 1.0),
        Family::BergmanModified => ([r.eps1, r.eps2], -4.0 / r.kappa, -1.0),
        Family::EuclidModified => ([r.eps1, r.eps2], 1.0, 0.0),
        _ => return Err(Error::InvalidSpec(format!("{fam} is not a model metric"))),
    };
    // N = 1 + σ Σ ε|z|²; H_ji = factor (N ε_j δ_ji − σ ε_j ε_i z̄_j z_i) / N²
    let mut nn = cz(1.0);
    for k in 0..2 {
        nn = &nn + &(&zs[k] * &zs[k].conj()).scale(Complex64::new(sigma * eps[k], 0.0));
    }
    let (inv_n2, n_val) = if sigma == 0.0 {
        (cz(1.0), cz(1.0))
    } else {
        ((&nn * &nn).recip()?, nn.clone())
    };
    let zero = cz(0.0);
    let one = cz(1.0);
    let i = ComplexJet::constant(Complex64::new(0.0, 1.0), nv, ord);
    let dz = |k: usize, conj: bool| {
        let mut v = vec![zero.clone(); N];
        v[2 * k] = one.clone();
        v[2 * k + 1] = if conj { -&i } else { i.clone() };
        v
    };
    let mut g = ComplexForms::new(N, nv, ord);
    for j in 0..2 {
        for k in 0..2 {
            let mut h = (&zs[j].conj() * &zs[k]).scale(Complex64::new(-sigma * eps[j] * eps[k], 0.0));
            if j == k {
                h = &h + &n_val.scale(Complex64::new(eps[j], 0.0));
            }
            let h = (&h * &inv_n2).scale(Complex64::new(factor, 0.0));
            g.sym(&h, &dz(j, false), &dz(k, true));
        }
    }
    let (gm, gi) = g.finish();
    let frame = MetricFrame::from_metric_and_j(tensor02(gm)?, standard_j(nv, ord)?)?;
    Ok(FrameBuild {
        frame,
        imag_residual: gi,
    })
}

/// The `(1,1)` tensor `L₀` from which the companion metric is built; for the
/// Liouville and complex families it is the block form with eigenvalues
/// `ρ₀, ρ₁` (resp. `ρ, ρ̄`), for the degenerate ones `ρ(∂x0⊗dx0 + ∂x1⊗θ) − Id`.
pub fn companion_l_tensor(spec: &CaseSpec, p: &Point, order: usize) -> Result<Tensor> {
    let r = spec.validate()?;
    let fam = spec.family;
    let x = seed(p, order)?;
    let (nv, ord) = (x[0].nvars(), x[0].order());
    let mut m = vec![Jet::zero(nv, ord); N * N];
    let one = Jet::constant(1.0, nv, ord);
    if fam.is_liouville() {
        let r0 = liouville_profile(fam, &r, 0, &x[0])?.rho;
        let r1 = liouville_profile(fam, &r, 1, &x[1])?.rho;
        m[0] = r0.clone();
        m[N + 1] = r1.clone();
        m[2 * N + 2] = &r0 + &r1;
        m[2 * N + 3] = &r0 * &r1;
        m[3 * N + 2] = -&one;
    } else if fam.is_complex() {
        let z = ComplexJet::new(x[0].clone(), x[1].clone())?;
        let rho = complex_profile(fam, &r, &z)?.rho;
        m[0] = rho.re.clone();
        m[1] = -&rho.im;
        m[N] = rho.im.clone();
        m[N + 1] = rho.re.clone();
        m[2 * N + 2] = rho.re.scale(2.0);
        m[2 * N + 3] = &(&rho.re * &rho.re) + &(&rho.im * &rho.im);
        m[3 * N + 2] = -&one;
    } else if fam.is_degenerate() {
        let rho = degenerate_profile(fam, &r, &x[0])?.rho;
        let h = degenerate_h_data(fam, &r, &x[2], &x[3])?;
        m[0] = rho.clone();
        m[N + 1] = rho.clone();
        m[N + 3] = -&(&rho * &h.tau1);
        for k in 0..N {
            m[k * N + k] -= &one;
        }
    } else {
        return Err(Error::InvalidSpec(format!("{fam} has no companion metric")));
    }
    Tensor::from_matrix(1, 1, N, m)
}

/// The companion `ĝ = |det L₀|^{-1/2} g L₀⁻¹`, chosen so that the tensor
/// `L = |det ĝ / det g|^{1/6} ĝ⁻¹ g` equals `L₀`. Shares the complex
/// structure of `g`.
pub fn build_companion(spec: &CaseSpec, p: &Point, order: usize) -> Result<MetricFrame> {
    let frame = build_frame(spec, p, order)?;
    let l0 = companion_l_tensor(spec, p, order)?;
    companion_from(&frame, &l0)
}

pub(crate) fn companion_from(frame: &MetricFrame, l0: &Tensor) -> Result<MetricFrame> {
    let l_inv = linalg::invert(l0.comps(), N)?;
    let l_inv = Tensor::from_matrix(1, 1, N, l_inv)?;
    let det = linalg::determinant(l0.comps(), N);
    let factor = det.abs_powf(-0.5)?;
    let ghat = frame.g.matmul(&l_inv, 0, 2).map(|c| c * &factor);
    MetricFrame::from_metric_and_j(ghat, frame.j.clone())
}

/// `g[t₁,t₂] = M⁻¹ / √|det M|` with
/// `M = t₁|det gA|^{1/6} gA⁻¹ + t₂|det gB|^{1/6} gB⁻¹`, keeping the complex
/// structure of `gA`.
pub fn pencil_metric(ga: &MetricFrame, gb: &MetricFrame, t1: f64, t2: f64) -> Result<MetricFrame> {
    let n = ga.dim();
    let weight = |f: &MetricFrame, t: f64| -> Result<Tensor> {
        let d = linalg::determinant(f.g.comps(), n).abs_powf(1.0 / 6.0)?;
        Ok(f.g_inv.map(|c| (c * &d).scale(t)))
    };
    let order = ga.order().min(gb.order());
    let m = weight(ga, t1)?.truncate(order).try_add(&weight(gb, t2)?.truncate(order))?;
    let det = linalg::determinant(m.comps(), n);
    if det.value().abs() <= 1e-10 {
        return Err(Error::Singular(format!("pencil-degenerate ({t1}, {t2})")));
    }
    let inv = linalg::invert(m.comps(), n)
        .map_err(|_| Error::Singular(format!("pencil-degenerate ({t1}, {t2})")))?;
    let root = det.abs_powf(-0.5)?;
    let g = Tensor::from_matrix(0, 2, n, inv.iter().map(|c| c * &root).collect())?;
    MetricFrame::from_metric_and_j(g, ga.j.truncate(order))
}

/// The 2D metric `h` of a degenerate family in the coordinates `(s0, s1)`.
pub fn degenerate_h(spec: &CaseSpec, s: [f64; 2], order: usize) -> Result<Tensor> {
    let r = spec.validate()?;
    let x = Jet::seed_point(&s, order)?;
    let h = degenerate_h_data(spec.family, &r, &x[0], &x[1])?;
    let z = Jet::zero(2, order);
    Tensor::from_matrix(0, 2, 2, vec![h.h00, z.clone(), z, h.h11])
}

/// One of the three 2D metrics of the introduction at `(x, y)`.
pub fn intro_2d_metric(tag: Intro2d, p: [f64; 2], order: usize) -> Result<Tensor> {
    let x = Jet::seed_point(&p, order)?;
    let z = Jet::zero(2, order);
    let (a, b) = match tag {
        Intro2d::A => (x[0].scale(4.0).exp(), x[0].scale(2.0).exp()),
        Intro2d::B => (x[0].scale(3.0).exp(), x[0].exp()),
        Intro2d::Flat => (Jet::constant(1.0, 2, order), Jet::constant(1.0, 2, order)),
    };
    Tensor::from_matrix(0, 2, 2, vec![a, z.clone(), z, b])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::kahler_residuals;

    fn residual(spec: &CaseSpec, p: &Point) -> f64 {
        let f = build_frame(spec, p, 2).unwrap();
        kahler_residuals(&f, &f.christoffel().unwrap()).unwrap().max()
    }

    #[test]
    fn l1_reference_point_is_kahler() {
        let spec = CaseSpec::new(Family::L1);
        assert!(residual(&spec, &[1.3, -0.4, 0.2, 0.7]) < 1e-9);
    }

    #[test]
    fn fs_at_origin_is_euclidean() {
        let f = build_frame(&CaseSpec::new(Family::Fs), &[0.0; 4], 1).unwrap();
        let g = f.g.values();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g[i * 4 + j] - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn printed_complex_sign_is_not_kahler() {
        let spec = CaseSpec::new(Family::C1);
        let p = [0.3, 0.8, 0.1, -0.2];
        let bad = build_frame_with(&spec, &p, 2, ComplexSign::Printed).unwrap();
        let good = build_frame_with(&spec, &p, 2, ComplexSign::Corrected).unwrap();
        let res = |f: &MetricFrame| kahler_residuals(f, &f.christoffel().unwrap()).unwrap();
        assert!(res(&bad.frame).j_squared > 0.1);
        assert!(res(&good.frame).max() < 1e-9);
        assert!(good.imag_residual < 1e-12);
    }

    #[test]
    fn pencil_unit_weights_reproduce_g() {
        let spec = CaseSpec::new(Family::L1);
        let p = [1.3, -0.4, 0.2, 0.7];
        let g = build_frame(&spec, &p, 2).unwrap();
        let gh = build_companion(&spec, &p, 2).unwrap();
        let pen = pencil_metric(&g, &gh, 1.0, 0.0).unwrap();
        assert!(pen.g.try_sub(&g.g).unwrap().comps().iter().all(|c| c.max_abs() < 1e-12));
    }

    #[test]
    fn intro_a_at_origin_is_identity() {
        let h = intro_2d_metric(Intro2d::A, [0.0, 0.3], 1).unwrap();
        assert_eq!(h.values(), vec![1.0, 0.0, 0.0, 1.0]);
    }
}
