//! c-projective machinery on a pair of c-projectively equivalent Kähler
//! metrics: the tensor `L`, the Sinjukov system and its mobility
//! conditions, constant-HSC classification, the vector-field equations
//! with their constants `a_ij`, and a connection-pattern comparison.

mod connection;
mod fields;
mod hsc;

pub use connection::{cproj_connection_check, ConnectionCheck};
pub use fields::{
    cproj_field_residual, eigenvalue_transport, pair_samples, AffineConstants, FieldClass,
    FieldResidual, PairSample,
};
pub use hsc::{hsc_classify, HscClassification, HscWitness, ROUNDING_FLOOR};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{self, CaseSpec, Family, Point};
use crate::geometry::{covariant_derivative, Connection, MetricFrame, Tensor};
use crate::jet::Jet;
use crate::linalg;

/// Which determinant ratio multiplies `ĝ⁻¹g` in `L`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum DetRatio {
    /// `|det ĝ / det g|^{1/6}`
    #[default]
    HatOverG,
    /// `|det g / det ĝ|^{1/6}`
    GOverHat,
}

/// `L`, its lowered form `L_ij = g_ia L^a_j`, `Λ = ¼ tr L` and `Λ_i = ∂_i Λ`.
#[derive(Clone, Debug)]
pub struct LTensorFrame {
    pub l: Tensor,
    pub l_lower: Tensor,
    pub lambda: Jet,
    pub lambda_form: Tensor,
}

pub fn l_tensor(g: &MetricFrame, ghat: &MetricFrame) -> Result<LTensorFrame> {
    l_tensor_with(g, ghat, DetRatio::HatOverG)
}

pub fn l_tensor_with(g: &MetricFrame, ghat: &MetricFrame, ratio: DetRatio) -> Result<LTensorFrame> {
    let n = g.dim();
    let order = g.order().min(ghat.order());
    let (gg, gh) = (g.g.truncate(order), ghat.g.truncate(order));
    let det_g = linalg::determinant(gg.comps(), n);
    let det_h = linalg::determinant(gh.comps(), n);
    let r = match ratio {
        DetRatio::HatOverG => det_h.try_div(&det_g)?,
        DetRatio::GOverHat => det_g.try_div(&det_h)?,
    };
    let factor = r.abs_powf(1.0 / (2.0 * (n as f64 / 2.0 + 1.0)))?;
    let l = ghat.g_inv.truncate(order).matmul(&gg, 1, 1).map(|c| c * &factor);
    let l_lower = gg.matmul(&l, 0, 2);
    let lambda = l.trace().scale(0.25);
    let grad = (0..n)
        .map(|i| lambda.derivative(i))
        .collect::<Result<Vec<_>>>()?;
    let lambda_form = Tensor::from_fn(n, 0, 1, |idx| grad[idx[0]].clone());
    Ok(LTensorFrame {
        l,
        l_lower,
        lambda,
        lambda_form,
    })
}

/// `g`, `ĝ`, their `L` frame and the Levi-Civita connection of `g` at a point.
#[derive(Clone, Debug)]
pub struct SinjukovPoint {
    pub p: Point,
    pub frame: MetricFrame,
    pub lt: LTensorFrame,
    pub conn: Connection,
    /// `∇_j Λ_i` stored as `[i, j]`.
    pub nabla_lambda: Tensor,
    /// Relative residual of `∇_k L_ij = Λ_i g_jk + Λ_j g_ik + Λ̄_i ω_jk + Λ̄_j ω_ik`.
    pub eq1: f64,
}

impl SinjukovPoint {
    pub fn new(spec: &CaseSpec, p: &Point, order: usize) -> Result<Self> {
        if order < 3 {
            return Err(Error::OrderTooLow {
                have: order,
                need: 3,
            });
        }
        let frame = families::build_frame(spec, p, order)?;
        let ghat = families::build_companion(spec, p, order)?;
        SinjukovPoint::from_pair(*p, frame, &ghat)
    }

    pub fn from_pair(p: Point, frame: MetricFrame, ghat: &MetricFrame) -> Result<Self> {
        let lt = l_tensor(&frame, ghat)?;
        let conn = frame.christoffel()?;
        let nabla_l = covariant_derivative(&lt.l_lower, &conn)?;
        let nabla_lambda = covariant_derivative(&lt.lambda_form, &conn)?;
        let eq1 = eq1_residual(&frame, &lt, &nabla_l);
        Ok(SinjukovPoint {
            p,
            frame,
            lt,
            conn,
            nabla_lambda,
            eq1,
        })
    }
}

fn eq1_residual(frame: &MetricFrame, lt: &LTensorFrame, nabla_l: &Tensor) -> f64 {
    let n = frame.dim();
    let g = frame.g.values();
    let w = frame.omega.values();
    let j = frame.j.values();
    let lam = lt.lambda_form.values();
    let lam_bar: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|a| j[a * n + i] * lam[a]).sum())
        .collect();
    let nl = nabla_l.values();
    let mut worst = 0.0_f64;
    let mut scale = 0.0_f64;
    for i in 0..n {
        for jj in 0..n {
            for k in 0..n {
                let rhs = lam[i] * g[jj * n + k]
                    + lam[jj] * g[i * n + k]
                    + lam_bar[i] * w[jj * n + k]
                    + lam_bar[jj] * w[i * n + k];
                let lhs = nl[(i * n + jj) * n + k];
                worst = worst.max((lhs - rhs).abs());
                scale = scale.max(lhs.abs()).max(rhs.abs());
            }
        }
    }
    worst / (1.0 + scale)
}

/// Residuals of the Sinjukov system over a batch of points.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SinjukovResiduals {
    pub eq1: f64,
    pub eq2: f64,
    pub eq3: f64,
    /// Fitted global constant `B`.
    pub b: f64,
    /// Fitted `μ` per point.
    pub mu: Vec<f64>,
}

/// Evaluate the Sinjukov system: the first equation pointwise, the second
/// with `μ` per point and `B` global from one least-squares fit, the third
/// with `μ` re-derived as a jet from the second and differentiated.
pub fn sinjukov_residuals(points: &[SinjukovPoint]) -> Result<SinjukovResiduals> {
    if points.is_empty() {
        return Err(Error::RankDeficient("no sample points".into()));
    }
    let n = points[0].frame.dim();
    let np = points.len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut weights = Vec::new();
    for (pi, sp) in points.iter().enumerate() {
        let g = sp.frame.g.values();
        let l = sp.lt.l_lower.values();
        let nl = sp.nabla_lambda.values();
        let scale = 1.0 + [&g, &l, &nl].iter().flat_map(|v| v.iter()).fold(0.0_f64, |m, x| m.max(x.abs()));
        for k in 0..n * n {
            let mut row = vec![0.0; np + 1];
            row[pi] = g[k] / scale;
            row[np] = l[k] / scale;
            rows.push(row);
            rhs.push(nl[k] / scale);
        }
        weights.push(scale);
    }
    let fit = linalg::lstsq(&rows, &rhs)?;
    let b = fit.x[np];
    let mu: Vec<f64> = fit.x[..np].to_vec();
    let eq2 = fit.residual_max;

    let mut eq3 = 0.0_f64;
    for sp in points {
        let mu_jet = mu_jet(sp, b)?;
        let lam = sp.lt.lambda_form.values();
        let mut worst = 0.0_f64;
        let mut scale = 0.0_f64;
        for k in 0..n {
            let d = mu_jet.derivative(k)?.value();
            worst = worst.max((d - 2.0 * b * lam[k]).abs());
            scale = scale.max(d.abs()).max((2.0 * b * lam[k]).abs());
        }
        eq3 = eq3.max(worst / (1.0 + scale));
    }
    Ok(SinjukovResiduals {
        eq1: points.iter().fold(0.0, |m, sp| m.max(sp.eq1)),
        eq2,
        eq3,
        b,
        mu,
    })
}

/// `μ = ¼ g^{ij}(∇_j Λ_i − B L_ij)` as a jet.
fn mu_jet(sp: &SinjukovPoint, b: f64) -> Result<Jet> {
    let n = sp.frame.dim();
    let order = sp.nabla_lambda.order();
    let gi = sp.frame.g_inv.truncate(order);
    let l = sp.lt.l_lower.truncate(order);
    let mut acc = Jet::zero(gi.nvars(), order);
    for i in 0..n {
        for j in 0..n {
            let t = sp.nabla_lambda.at(i, j) - &l.at(i, j).scale(b);
            acc += gi.at(i, j) * &t;
        }
    }
    Ok(acc.scale(0.25))
}

/// Entry of `∇Λ` whose vanishing the Liouville and complex mobility
/// condition asks for: the `(s0, s1)` component of the (1,1) form
/// `g^{ik} ∇_j Λ_k`, in which `L` is block diagonal.
pub const MOBILITY_ENTRY: (usize, usize) = (2, 3);

/// `∇Λ` values (row `i`, column `j` = `∇_j Λ_i`) at a point.
pub fn nabla_lambda_values(spec: &CaseSpec, p: &Point, order: usize) -> Result<Vec<f64>> {
    Ok(SinjukovPoint::new(spec, p, order)?.nabla_lambda.values())
}

/// `∇Λ` with its first index raised, row `i`, column `j` = `g^{ik} ∇_j Λ_k`.
pub fn nabla_lambda_mixed(sp: &SinjukovPoint) -> Vec<f64> {
    let n = sp.frame.dim();
    let gi = sp.frame.g_inv.values();
    let v = sp.nabla_lambda.values();
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = (0..n).map(|k| gi[i * n + k] * v[k * n + j]).sum();
        }
    }
    a
}

/// The mobility condition scalar for Liouville and complex families.
pub fn mobility_condition_liouville(spec: &CaseSpec, p: &Point) -> Result<f64> {
    let f = spec.family;
    if !(f.is_liouville() || f.is_complex()) {
        return Err(Error::InvalidSpec(format!("{f} is not of Liouville or complex type")));
    }
    let sp = SinjukovPoint::new(spec, p, 3)?;
    let (i, j) = MOBILITY_ENTRY;
    Ok(nabla_lambda_mixed(&sp)[i * 4 + j])
}

/// `3ρ²F'²ρ' − Fρ²F''ρ' + 4FρF'ρ'² + 3F²ρ'³ − 3Fρ²F'ρ'' − 4F²ρρ'ρ'' + F²ρ²ρ'''`
/// for a degenerate family at `x0`.
pub fn mobility_condition_degenerate(spec: &CaseSpec, x0: f64) -> Result<f64> {
    Ok(mobility_terms_degenerate(spec, x0)?.iter().sum())
}

/// `|Σ terms| / Σ |terms|` of [`mobility_condition_degenerate`], the
/// condition relative to the size of its terms.
pub fn mobility_relative_degenerate(spec: &CaseSpec, x0: f64) -> Result<f64> {
    let t = mobility_terms_degenerate(spec, x0)?;
    let scale: f64 = t.iter().map(|x| x.abs()).sum();
    Ok(t.iter().sum::<f64>().abs() / scale.max(f64::MIN_POSITIVE))
}

/// The seven terms of [`mobility_condition_degenerate`], in printed order.
pub fn mobility_terms_degenerate(spec: &CaseSpec, x0: f64) -> Result<[f64; 7]> {
    let f = spec.family;
    if !f.is_degenerate() {
        return Err(Error::InvalidSpec(format!("{f} is not of degenerate type")));
    }
    let r = spec.validate()?;
    let x = Jet::variable(0, x0, 1, 3)?;
    let pr = families::degenerate_profile(f, &r, &x)?;
    let d = |j: &Jet, k: usize| j.partial(&[k]);
    let (rho, r1, r2, r3) = (d(&pr.rho, 0)?, d(&pr.rho, 1)?, d(&pr.rho, 2)?, d(&pr.rho, 3)?);
    let (ff, f1, f2) = (d(&pr.f, 0)?, d(&pr.f, 1)?, d(&pr.f, 2)?);
    Ok([
        3.0 * rho * rho * f1 * f1 * r1,
        -ff * rho * rho * f2 * r1,
        4.0 * ff * rho * f1 * r1 * r1,
        3.0 * ff * ff * r1.powi(3),
        -3.0 * ff * rho * rho * f1 * r2,
        -4.0 * ff * ff * rho * r1 * r2,
        ff * ff * rho * rho * r3,
    ])
}

/// True for the families on which the `L`-based equations are defined.
pub fn has_companion(f: Family) -> bool {
    f.is_liouville() || f.is_complex() || f.is_degenerate()
}
