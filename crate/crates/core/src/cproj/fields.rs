use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{l_tensor, LTensorFrame};
use crate::algebras::VectorFieldExpr;
use crate::error::{Error, Result};
use crate::families::{self, CaseSpec, Family, Point};
use crate::geometry::{lie_derivative, MetricFrame};
use crate::jet::Jet;
use crate::linalg;

/// The constants of `L_v L = −a01 L² + (a11 − a00) L + a10 Id`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AffineConstants {
    pub a00: f64,
    pub a01: f64,
    pub a10: f64,
    pub a11: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldClass {
    Essential,
    Homothetic,
    Killing,
}

impl AffineConstants {
    pub fn to_vec(self) -> Vec<f64> {
        vec![self.a00, self.a01, self.a10, self.a11]
    }

    fn from_slice(x: &[f64]) -> Self {
        AffineConstants {
            a00: x[0],
            a01: x[1],
            a10: x[2],
            a11: x[3],
        }
    }

    /// Essential iff `a01 ≠ 0`, properly homothetic iff `a01 = 0 ≠ a00`,
    /// otherwise Killing; "zero" means `|a| ≤ tol`.
    pub fn classify(&self, tol: f64) -> FieldClass {
        if self.a01.abs() > tol {
            FieldClass::Essential
        } else if self.a00.abs() > tol {
            FieldClass::Homothetic
        } else {
            FieldClass::Killing
        }
    }
}

/// `g` and `L` of a family at one sample point.
#[derive(Clone, Debug)]
pub struct PairSample {
    pub p: Point,
    pub family: Family,
    pub frame: MetricFrame,
    pub lt: LTensorFrame,
}

pub fn pair_samples(spec: &CaseSpec, points: &[Point], order: usize) -> Result<Vec<PairSample>> {
    points
        .iter()
        .map(|p| {
            let frame = families::build_frame(spec, p, order)?;
            let ghat = families::build_companion(spec, p, order)?;
            let lt = l_tensor(&frame, &ghat)?;
            Ok(PairSample {
                p: *p,
                family: spec.family,
                frame,
                lt,
            })
        })
        .collect()
}

/// Residuals of the two field equations and the constants used.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldResidual {
    pub constants: AffineConstants,
    /// `L_v L + a01 L² − (a11 − a00) L − a10 Id`, relative.
    pub lvl: f64,
    /// `L_v g + 5 a00 g + a01 (g·L + ½ tr(L) g)`, relative.
    pub lvg: f64,
    /// Best joint residual when the metric equation is read as
    /// `L_v g − 3 a00 g − a01 (g·L + tr(L) g)`.
    pub lvg_literal: f64,
    /// Free fit `L_v g = α g + β g·L + γ tr(L) g`: `[α, β, γ]`.
    pub lvg_free: [f64; 3],
    pub rank: usize,
    pub condition: f64,
}

struct PointTerms {
    lvl: Vec<f64>,
    l: Vec<f64>,
    l2: Vec<f64>,
    lvg: Vec<f64>,
    g: Vec<f64>,
    gl: Vec<f64>,
    tr: f64,
    scale: f64,
}

fn point_terms(s: &PairSample, v: &[Jet]) -> Result<PointTerms> {
    let n = s.frame.dim();
    let lvl = lie_derivative(v, &s.lt.l)?.values();
    let lvg = lie_derivative(v, &s.frame.g)?.values();
    let l = s.lt.l.values();
    let g = s.frame.g.values();
    let gl = s.lt.l_lower.values();
    let mut l2 = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            l2[i * n + j] = (0..n).map(|a| l[i * n + a] * l[a * n + j]).sum();
        }
    }
    let tr = (0..n).map(|i| l[i * n + i]).sum();
    let scale = 1.0
        + [&lvl, &l, &l2, &lvg, &g, &gl]
            .iter()
            .flat_map(|x| x.iter())
            .fold(0.0_f64, |m, x| m.max(x.abs()));
    Ok(PointTerms {
        lvl,
        l,
        l2,
        lvg,
        g,
        gl,
        tr,
        scale,
    })
}

#[derive(Clone, Copy, PartialEq)]
enum MetricForm {
    Derived,
    Literal,
}

/// Rows `(A a = b)` of both equations for the unknowns `(a00, a01, a10, a11)`.
fn rows(terms: &[PointTerms], form: MetricForm) -> (Vec<Vec<f64>>, Vec<f64>, usize) {
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut n_lvl = 0;
    for t in terms {
        let n2 = t.l.len();
        let n = (n2 as f64).sqrt() as usize;
        for k in 0..n2 {
            let id = if k / n == k % n { 1.0 } else { 0.0 };
            a.push(
                [t.l[k], t.l2[k], -id, -t.l[k]]
                    .iter()
                    .map(|x| x / t.scale)
                    .collect(),
            );
            b.push(-t.lvl[k] / t.scale);
            n_lvl += 1;
        }
    }
    for t in terms {
        for k in 0..t.g.len() {
            let row = match form {
                MetricForm::Derived => [5.0 * t.g[k], t.gl[k] + 0.5 * t.tr * t.g[k], 0.0, 0.0],
                MetricForm::Literal => [-3.0 * t.g[k], -(t.gl[k] + t.tr * t.g[k]), 0.0, 0.0],
            };
            a.push(row.iter().map(|x| x / t.scale).collect());
            b.push(-t.lvg[k] / t.scale);
        }
    }
    (a, b, n_lvl)
}

fn residuals(a: &[Vec<f64>], b: &[f64], x: &[f64], split: usize) -> (f64, f64) {
    let mut r = (0.0_f64, 0.0_f64);
    for (k, (row, rhs)) in a.iter().zip(b).enumerate() {
        let e = (row.iter().zip(x).map(|(p, q)| p * q).sum::<f64>() - rhs).abs();
        if k < split {
            r.0 = r.0.max(e);
        } else {
            r.1 = r.1.max(e);
        }
    }
    r
}

/// Check `v` against both field equations over the samples, fitting the
/// constants by joint least squares unless `fixed` is given.
pub fn cproj_field_residual(
    samples: &[PairSample],
    v: &VectorFieldExpr,
    fixed: Option<AffineConstants>,
) -> Result<FieldResidual> {
    if samples.is_empty() {
        return Err(Error::RankDeficient("no sample points".into()));
    }
    let terms = samples
        .iter()
        .map(|s| {
            let vj = v.at(&s.p, s.frame.order())?;
            point_terms(s, &vj)
        })
        .collect::<Result<Vec<_>>>()?;

    let (a, b, split) = rows(&terms, MetricForm::Derived);
    let fit = linalg::lstsq(&a, &b)?;
    let x = match fixed {
        Some(c) => c.to_vec(),
        None => fit.x.clone(),
    };
    let (lvl, lvg) = residuals(&a, &b, &x, split);

    let (al, bl, _) = rows(&terms, MetricForm::Literal);
    let lvg_literal = linalg::lstsq(&al, &bl)?.residual_max;

    let mut free_rows = Vec::new();
    let mut free_rhs = Vec::new();
    for t in &terms {
        for k in 0..t.g.len() {
            free_rows.push(
                [t.g[k], t.gl[k], t.tr * t.g[k]]
                    .iter()
                    .map(|x| x / t.scale)
                    .collect(),
            );
            free_rhs.push(t.lvg[k] / t.scale);
        }
    }
    let free = linalg::lstsq(&free_rows, &free_rhs)?;
    Ok(FieldResidual {
        constants: AffineConstants::from_slice(&x),
        lvl,
        lvg,
        lvg_literal,
        lvg_free: [free.x[0], free.x[1], free.x[2]],
        rank: fit.rank,
        condition: fit.condition,
    })
}

/// Eigenvalue functions of `L` read off its block form: `ρ0, ρ1` (Liouville),
/// `ρ` (complex, one of a conjugate pair), `ρ − 1, −1` (degenerate).
fn eigenvalue_jets(s: &PairSample) -> Vec<(Jet, Jet)> {
    let l = &s.lt.l;
    let zero = Jet::zero(l.nvars(), l.order());
    match s.family {
        f if f.is_complex() => vec![(l.at(0, 0).clone(), l.at(1, 0).clone())],
        f if f.is_degenerate() => vec![
            (l.at(0, 0).clone(), zero.clone()),
            (l.at(2, 2).clone(), zero),
        ],
        _ => vec![
            (l.at(0, 0).clone(), zero.clone()),
            (l.at(1, 1).clone(), zero),
        ],
    }
}

/// Largest relative residual of `v(f) = −a01 f² + (a11 − a00) f + a10` over
/// the eigenvalues `f` of `L` at the samples.
pub fn eigenvalue_transport(samples: &[PairSample], v: &VectorFieldExpr, a: &AffineConstants) -> Result<f64> {
    let mut worst = 0.0_f64;
    for s in samples {
        let vv = v.values(&s.p)?;
        for (re, im) in eigenvalue_jets(s) {
            let grad_re = re.gradient();
            let grad_im = im.gradient();
            let vf = Complex64::new(
                vv.iter().zip(&grad_re).map(|(p, q)| p * q).sum(),
                vv.iter().zip(&grad_im).map(|(p, q)| p * q).sum(),
            );
            let f = Complex64::new(re.value(), im.value());
            let rhs = -a.a01 * f * f + (a.a11 - a.a00) * f + a.a10;
            let scale = 1.0 + vf.norm().max(rhs.norm());
            worst = worst.max((vf - rhs).norm() / scale);
        }
    }
    Ok(worst)
}
