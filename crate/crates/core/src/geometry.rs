//! Pointwise tensor calculus on jets: Levi-Civita connection, curvature,
//! covariant and Lie derivatives, Kähler residuals and holomorphic sectional
//! curvature.
//!
//! Conventions:
//! * Tensor components are stored with upper indices first, then lower ones.
//!   Derivative indices produced here are appended last.
//! * `Γ^k_ij = ½ g^kl (∂_i g_lj + ∂_j g_il − ∂_l g_ij)`, stored as `[k, i, j]`.
//! * `R^l_kij = ∂_i Γ^l_jk − ∂_j Γ^l_ik + Γ^l_ia Γ^a_jk − Γ^l_ja Γ^a_ik`, stored
//!   as `[l, k, i, j]`, so that `R(∂_i, ∂_j)∂_k = R^l_kij ∂_l`.
//! * Sectional curvature is `g(R(X,Y)Y, X) / (g(X,X)g(Y,Y) − g(X,Y)²)`; the
//!   unit sphere has curvature +1.
//! * `ω(X,Y) = g(JX, Y)`, i.e. `ω_ij = J^a_i g_aj`, and `J^i_j = ω_jk g^ki`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::linalg;

/// A jet-valued tensor of valence `(upper, lower)` over `dim` coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    dim: usize,
    upper: usize,
    lower: usize,
    comps: Vec<Jet>,
}

impl Tensor {
    pub fn zeros(dim: usize, upper: usize, lower: usize, nvars: usize, order: usize) -> Self {
        let len = dim.pow((upper + lower) as u32);
        Tensor {
            dim,
            upper,
            lower,
            comps: vec![Jet::zero(nvars, order); len],
        }
    }

    /// Build from a component function receiving the full index tuple.
    pub fn from_fn(
        dim: usize,
        upper: usize,
        lower: usize,
        mut f: impl FnMut(&[usize]) -> Jet,
    ) -> Self {
        let rank = upper + lower;
        let len = dim.pow(rank as u32);
        let mut idx = vec![0; rank];
        let mut comps = Vec::with_capacity(len);
        for flat in 0..len {
            unflatten(flat, dim, &mut idx);
            comps.push(f(&idx));
        }
        Tensor {
            dim,
            upper,
            lower,
            comps,
        }
    }

    /// A `(0,2)` or `(1,1)` tensor from a row-major `dim × dim` matrix.
    pub fn from_matrix(upper: usize, lower: usize, dim: usize, m: Vec<Jet>) -> Result<Self> {
        if upper + lower != 2 || m.len() != dim * dim {
            return Err(Error::UnsupportedValence(upper, lower));
        }
        Ok(Tensor {
            dim,
            upper,
            lower,
            comps: m,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn valence(&self) -> (usize, usize) {
        (self.upper, self.lower)
    }

    pub fn rank(&self) -> usize {
        self.upper + self.lower
    }

    pub fn order(&self) -> usize {
        self.comps[0].order()
    }

    pub fn nvars(&self) -> usize {
        self.comps[0].nvars()
    }

    pub fn comps(&self) -> &[Jet] {
        &self.comps
    }

    fn flat(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank());
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn get(&self, idx: &[usize]) -> &Jet {
        &self.comps[self.flat(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: Jet) {
        let k = self.flat(idx);
        self.comps[k] = value;
    }

    /// Component `[i, j]` of a rank-2 tensor.
    pub fn at(&self, i: usize, j: usize) -> &Jet {
        &self.comps[i * self.dim + j]
    }

    /// Constant terms of all components.
    pub fn values(&self) -> Vec<f64> {
        self.comps.iter().map(Jet::value).collect()
    }

    pub fn truncate(&self, order: usize) -> Tensor {
        self.map(|c| c.truncate(order))
    }

    pub fn map(&self, f: impl Fn(&Jet) -> Jet) -> Tensor {
        Tensor {
            dim: self.dim,
            upper: self.upper,
            lower: self.lower,
            comps: self.comps.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Tensor {
        self.map(|c| c.scale(s))
    }

    pub fn try_sub(&self, other: &Tensor) -> Result<Tensor> {
        self.check_same(other)?;
        let order = self.order().min(other.order());
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.truncate(order).try_sub(&b.truncate(order)))
            .collect::<Result<_>>()?;
        Ok(Tensor {
            comps,
            ..self.clone_shape()
        })
    }

    pub fn try_add(&self, other: &Tensor) -> Result<Tensor> {
        self.try_sub(&other.scale(-1.0))
    }

    fn clone_shape(&self) -> Tensor {
        Tensor {
            dim: self.dim,
            upper: self.upper,
            lower: self.lower,
            comps: Vec::new(),
        }
    }

    fn check_same(&self, other: &Tensor) -> Result<()> {
        if self.dim != other.dim || self.valence() != other.valence() {
            return Err(Error::UnsupportedValence(other.upper, other.lower));
        }
        Ok(())
    }

    /// Largest absolute constant term.
    pub fn max_value(&self) -> f64 {
        self.comps.iter().fold(0.0_f64, |m, c| m.max(c.value().abs()))
    }

    /// Partial derivative of every component along coordinate `var`.
    pub fn partial(&self, var: usize) -> Result<Tensor> {
        Ok(Tensor {
            comps: self
                .comps
                .iter()
                .map(|c| c.derivative(var))
                .collect::<Result<_>>()?,
            ..self.clone_shape()
        })
    }

    /// Matrix product `A B` of two rank-2 tensors viewed as `dim × dim`
    /// matrices (first index = row). The valence of the result is given.
    pub fn matmul(&self, other: &Tensor, upper: usize, lower: usize) -> Tensor {
        let n = self.dim;
        let order = self.order().min(other.order());
        let (a, b) = (self.truncate(order), other.truncate(order));
        Tensor::from_fn(n, upper, lower, |idx| {
            let mut acc = Jet::zero(a.nvars(), order);
            for k in 0..n {
                acc += a.at(idx[0], k) * b.at(k, idx[1]);
            }
            acc
        })
    }

    /// Transpose of a rank-2 tensor.
    pub fn transpose(&self) -> Tensor {
        let n = self.dim;
        Tensor {
            comps: (0..n * n).map(|k| self.comps[(k % n) * n + k / n].clone()).collect(),
            ..self.clone_shape()
        }
    }

    /// Trace of a `(1,1)` tensor.
    pub fn trace(&self) -> Jet {
        let mut acc = Jet::zero(self.nvars(), self.order());
        for i in 0..self.dim {
            acc += self.at(i, i);
        }
        acc
    }

    pub fn identity(dim: usize, nvars: usize, order: usize) -> Tensor {
        Tensor::from_fn(dim, 1, 1, |idx| {
            Jet::constant(if idx[0] == idx[1] { 1.0 } else { 0.0 }, nvars, order)
        })
    }
}

fn unflatten(mut flat: usize, dim: usize, idx: &mut [usize]) {
    for slot in idx.iter_mut().rev() {
        *slot = flat % dim;
        flat /= dim;
    }
}

/// Metric, Kähler form and complex structure at a point.
#[derive(Clone, Debug)]
pub struct MetricFrame {
    pub g: Tensor,
    pub g_inv: Tensor,
    pub omega: Tensor,
    pub j: Tensor,
}

impl MetricFrame {
    /// Assemble from `g` and `ω`, deriving `J^i_j = ω_jk g^ki`.
    pub fn from_metric_and_form(g: Tensor, omega: Tensor) -> Result<Self> {
        let g_inv = inverse_metric(&g)?;
        let n = g.dim();
        let j = Tensor::from_fn(n, 1, 1, |idx| {
            let (i, jj) = (idx[0], idx[1]);
            let mut acc = Jet::zero(g.nvars(), g.order());
            for k in 0..n {
                acc += omega.at(jj, k) * g_inv.at(k, i);
            }
            acc
        });
        Ok(MetricFrame { g, g_inv, omega, j })
    }

    /// Frame with a prescribed complex structure; `ω_ij = J^a_i g_aj`.
    pub fn from_metric_and_j(g: Tensor, j: Tensor) -> Result<Self> {
        let g_inv = inverse_metric(&g)?;
        let n = g.dim();
        let omega = Tensor::from_fn(n, 0, 2, |idx| {
            let mut acc = Jet::zero(g.nvars(), g.order());
            for a in 0..n {
                acc += j.at(a, idx[0]) * g.at(a, idx[1]);
            }
            acc
        });
        Ok(MetricFrame { g, g_inv, omega, j })
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn order(&self) -> usize {
        self.g.order()
    }

    pub fn christoffel(&self) -> Result<Connection> {
        christoffel(&self.g, &self.g_inv)
    }
}

/// Inverse of a `(0,2)` metric as a `(2,0)` tensor.
pub fn inverse_metric(g: &Tensor) -> Result<Tensor> {
    let n = g.dim();
    let inv = linalg::invert(g.comps(), n)?;
    Ok(Tensor {
        dim: n,
        upper: 2,
        lower: 0,
        comps: inv,
    })
}

/// Levi-Civita connection coefficients `Γ^k_ij`, one jet order below `g`.
#[derive(Clone, Debug)]
pub struct Connection {
    pub gamma: Tensor,
}

impl Connection {
    pub fn order(&self) -> usize {
        self.gamma.order()
    }

    pub fn dim(&self) -> usize {
        self.gamma.dim()
    }

    /// `Γ^k_ij` as a jet.
    pub fn at(&self, k: usize, i: usize, j: usize) -> &Jet {
        self.gamma.get(&[k, i, j])
    }
}

pub fn christoffel(g: &Tensor, g_inv: &Tensor) -> Result<Connection> {
    let n = g.dim();
    if g.order() == 0 {
        return Err(Error::OrderTooLow { have: 0, need: 1 });
    }
    let order = g.order() - 1;
    let dg: Vec<Tensor> = (0..n).map(|v| g.partial(v)).collect::<Result<_>>()?;
    let ginv = g_inv.truncate(order);
    // first kind: Γ_lij = ½(∂_i g_lj + ∂_j g_il − ∂_l g_ij)
    let first = Tensor::from_fn(n, 0, 3, |idx| {
        let (l, i, j) = (idx[0], idx[1], idx[2]);
        (dg[i].at(l, j) + dg[j].at(i, l) - dg[l].at(i, j)).scale(0.5)
    });
    let gamma = Tensor::from_fn(n, 1, 2, |idx| {
        let (k, i, j) = (idx[0], idx[1], idx[2]);
        let mut acc = Jet::zero(g.nvars(), order);
        for l in 0..n {
            acc += ginv.at(k, l) * first.get(&[l, i, j]);
        }
        acc
    });
    Ok(Connection { gamma })
}

/// The `(1,3)` curvature tensor `R^l_kij`, one order below the connection.
pub fn riemann(conn: &Connection) -> Result<Tensor> {
    let n = conn.dim();
    if conn.order() == 0 {
        return Err(Error::OrderTooLow { have: 0, need: 1 });
    }
    let order = conn.order() - 1;
    let dgam: Vec<Tensor> = (0..n)
        .map(|v| conn.gamma.partial(v))
        .collect::<Result<_>>()?;
    let gam = conn.gamma.truncate(order);
    Ok(Tensor::from_fn(n, 1, 3, |idx| {
        let (l, k, i, j) = (idx[0], idx[1], idx[2], idx[3]);
        let mut acc = dgam[i].get(&[l, j, k]) - dgam[j].get(&[l, i, k]);
        for a in 0..n {
            acc += gam.get(&[l, i, a]) * gam.get(&[a, j, k]);
            acc -= gam.get(&[l, j, a]) * gam.get(&[a, i, k]);
        }
        acc
    }))
}

/// Covariant derivative `∇T` with the new index appended last.
pub fn covariant_derivative(t: &Tensor, conn: &Connection) -> Result<Tensor> {
    let n = t.dim();
    if t.order() == 0 {
        return Err(Error::OrderTooLow { have: 0, need: 1 });
    }
    if t.rank() > 3 {
        return Err(Error::UnsupportedValence(t.upper, t.lower));
    }
    let order = t.order() - 1;
    let gam = conn.gamma.truncate(order);
    let tt = t.truncate(order);
    let dt: Vec<Tensor> = (0..n).map(|v| t.partial(v)).collect::<Result<_>>()?;
    let (up, rank) = (t.upper, t.rank());
    Ok(Tensor::from_fn(n, up, t.lower + 1, |idx| {
        let (base, k) = (&idx[..rank], idx[rank]);
        let mut acc = dt[k].get(base).clone();
        let mut probe = base.to_vec();
        for slot in 0..rank {
            let orig = base[slot];
            for a in 0..n {
                probe[slot] = a;
                if slot < up {
                    acc += gam.get(&[orig, k, a]) * tt.get(&probe);
                } else {
                    acc -= gam.get(&[a, k, orig]) * tt.get(&probe);
                }
            }
            probe[slot] = orig;
        }
        acc
    }))
}

/// Lie derivative `L_v T` for a vector field given by component jets.
pub fn lie_derivative(v: &[Jet], t: &Tensor) -> Result<Tensor> {
    let n = t.dim();
    if v.len() != n {
        return Err(Error::Other(format!(
            "vector field has {} components, tensor dimension is {n}",
            v.len()
        )));
    }
    if t.order() == 0 || v[0].order() == 0 {
        return Err(Error::OrderTooLow { have: 0, need: 1 });
    }
    let order = (t.order() - 1).min(v[0].order() - 1);
    let vv: Vec<Jet> = v.iter().map(|c| c.truncate(order)).collect();
    let dv: Vec<Vec<Jet>> = v
        .iter()
        .map(|c| {
            (0..n)
                .map(|k| c.derivative(k).map(|d| d.truncate(order)))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    let tt = t.truncate(order);
    let dt: Vec<Tensor> = (0..n)
        .map(|k| t.partial(k).map(|d| d.truncate(order)))
        .collect::<Result<_>>()?;
    let (up, rank) = (t.upper, t.rank());
    Ok(Tensor::from_fn(n, up, t.lower, |idx| {
        let mut acc = Jet::zero(t.nvars(), order);
        for k in 0..n {
            acc += &vv[k] * dt[k].get(idx);
        }
        let mut probe = idx.to_vec();
        for slot in 0..rank {
            let orig = idx[slot];
            for k in 0..n {
                probe[slot] = k;
                if slot < up {
                    acc -= tt.get(&probe) * &dv[orig][k];
                } else {
                    acc += tt.get(&probe) * &dv[k][orig];
                }
            }
            probe[slot] = orig;
        }
        acc
    }))
}

/// Lower the first index of the curvature: `R_lkij = g_la R^a_kij`.
pub fn lower_curvature(g: &Tensor, r: &Tensor) -> Tensor {
    let n = g.dim();
    let order = r.order();
    let gl = g.truncate(order);
    Tensor::from_fn(n, 0, 4, |idx| {
        let mut acc = Jet::zero(g.nvars(), order);
        for a in 0..n {
            acc += gl.at(idx[0], a) * r.get(&[a, idx[1], idx[2], idx[3]]);
        }
        acc
    })
}

fn bilinear(m: &[f64], n: usize, x: &[f64], y: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += m[i * n + j] * x[i] * y[j];
        }
    }
    acc
}

fn apply(m: &[f64], n: usize, x: &[f64]) -> Vec<f64> {
    (0..n)
        .map(|i| (0..n).map(|j| m[i * n + j] * x[j]).sum())
        .collect()
}

/// Holomorphic sectional curvature of the plane spanned by `v` and `Jv`:
/// `g(R(v,Jv)Jv, v) / g(v,v)²`.
pub fn hsc(frame: &MetricFrame, curvature: &Tensor, v: &[f64]) -> Result<f64> {
    let n = frame.dim();
    let g = frame.g.values();
    let jv = apply(&frame.j.values(), n, v);
    let norm = bilinear(&g, n, v, v);
    let scale = g.iter().fold(0.0_f64, |m, x| m.max(x.abs())) * v.iter().map(|x| x * x).sum::<f64>();
    if norm.abs() <= 1e-8 * scale.max(1e-300) {
        return Err(Error::Singular("null direction for sectional curvature".into()));
    }
    let r = curvature.values();
    // R(v,Jv)Jv = R^l_kij Jv^k v^i Jv^j
    let mut rv = vec![0.0; n];
    for l in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    rv[l] += r[((l * n + k) * n + i) * n + j] * jv[k] * v[i] * jv[j];
                }
            }
        }
    }
    let num: f64 = (0..n)
        .map(|l| (0..n).map(|m| g[l * n + m] * rv[l] * v[m]).sum::<f64>())
        .sum();
    Ok(num / (norm * norm))
}

/// Sectional curvature of the plane spanned by two vectors.
pub fn sectional_curvature(g: &Tensor, curvature: &Tensor, x: &[f64], y: &[f64]) -> Result<f64> {
    let n = g.dim();
    let gv = g.values();
    let r = curvature.values();
    let mut rv = vec![0.0; n];
    for l in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    rv[l] += r[((l * n + k) * n + i) * n + j] * y[k] * x[i] * y[j];
                }
            }
        }
    }
    let num = bilinear(&gv, n, &rv, x);
    let den = bilinear(&gv, n, x, x) * bilinear(&gv, n, y, y) - bilinear(&gv, n, x, y).powi(2);
    if den.abs() < 1e-14 {
        return Err(Error::Singular("degenerate plane".into()));
    }
    Ok(num / den)
}

/// Gauss curvature of a 2D metric at the expansion point.
pub fn gauss_curvature_2d(h: &Tensor) -> Result<f64> {
    if h.dim() != 2 || h.valence() != (0, 2) {
        return Err(Error::UnsupportedValence(h.upper, h.lower));
    }
    if h.order() < 2 {
        return Err(Error::OrderTooLow {
            have: h.order(),
            need: 2,
        });
    }
    let h_inv = inverse_metric(h)?;
    let conn = christoffel(h, &h_inv)?;
    let r = riemann(&conn)?;
    sectional_curvature(h, &r, &[1.0, 0.0], &[0.0, 1.0])
}

/// Maximum residuals of the Kähler conditions, each relative to
/// `1 + (largest component involved)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct KahlerResiduals {
    pub symmetry: f64,
    pub j_squared: f64,
    pub omega_compat: f64,
    pub nabla_j: f64,
    pub d_omega: f64,
}

impl KahlerResiduals {
    pub fn max(&self) -> f64 {
        [
            self.symmetry,
            self.j_squared,
            self.omega_compat,
            self.nabla_j,
            self.d_omega,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn relative(abs: f64, scale: f64) -> f64 {
    abs / (1.0 + scale)
}

pub fn kahler_residuals(frame: &MetricFrame, conn: &Connection) -> Result<KahlerResiduals> {
    let n = frame.dim();
    let g = frame.g.values();
    let w = frame.omega.values();
    let j = frame.j.values();
    let gs = frame.g.max_value();
    let ws = frame.omega.max_value();
    let js = frame.j.max_value();

    let mut sym = 0.0_f64;
    let mut jsq = 0.0_f64;
    let mut compat = 0.0_f64;
    for a in 0..n {
        for b in 0..n {
            sym = sym.max((g[a * n + b] - g[b * n + a]).abs());
            let mut sq = if a == b { 1.0 } else { 0.0 };
            let mut wj = -w[a * n + b];
            for c in 0..n {
                sq += j[a * n + c] * j[c * n + b];
                wj += j[c * n + a] * g[c * n + b];
            }
            jsq = jsq.max(sq.abs());
            compat = compat.max(wj.abs());
        }
    }
    let nabla_j = covariant_derivative(&frame.j, conn)?;
    let nj = nabla_j.max_value();

    // dω_ijk = ∂_i ω_jk + ∂_j ω_ki + ∂_k ω_ij
    let dw: Vec<Vec<f64>> = (0..n)
        .map(|v| frame.omega.partial(v).map(|t| t.values()))
        .collect::<Result<_>>()?;
    let mut d_omega = 0.0_f64;
    let mut dscale = 0.0_f64;
    for i in 0..n {
        for jj in 0..n {
            for k in 0..n {
                let s = dw[i][jj * n + k] + dw[jj][k * n + i] + dw[k][i * n + jj];
                d_omega = d_omega.max(s.abs());
                dscale = dscale.max(dw[i][jj * n + k].abs());
            }
        }
    }
    Ok(KahlerResiduals {
        symmetry: relative(sym, gs),
        j_squared: relative(jsq, js * js),
        omega_compat: relative(compat, ws.max(js * gs)),
        nabla_j: relative(nj, js * conn.gamma.max_value()),
        d_omega: relative(d_omega, dscale),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sphere(theta: f64, phi: f64, order: usize) -> Tensor {
        let p = Jet::seed_point(&[theta, phi], order).unwrap();
        let s = p[0].sin();
        let one = Jet::constant(1.0, 2, order);
        let zero = Jet::zero(2, order);
        Tensor::from_matrix(0, 2, 2, vec![one, zero.clone(), zero, &s * &s]).unwrap()
    }

    #[test]
    fn sphere_christoffel_and_curvature() {
        let h = sphere(1.1, 0.3, 3);
        let conn = christoffel(&h, &inverse_metric(&h).unwrap()).unwrap();
        assert_relative_eq!(
            conn.at(0, 1, 1).value(),
            -(1.1f64).sin() * (1.1f64).cos(),
            epsilon = 1e-14
        );
        assert_relative_eq!(gauss_curvature_2d(&h).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn flat_metric_has_no_connection() {
        let p = Jet::seed_point(&[0.1, 0.2, 0.3, 0.4], 2).unwrap();
        let _ = &p;
        let g = Tensor::identity(4, 4, 2);
        let g = Tensor::from_matrix(0, 2, 4, g.comps().to_vec()).unwrap();
        let conn = christoffel(&g, &inverse_metric(&g).unwrap()).unwrap();
        assert_eq!(conn.gamma.max_value(), 0.0);
        assert_eq!(riemann(&conn).unwrap().max_value(), 0.0);
    }
}
