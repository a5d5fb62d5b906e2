use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::MetricFrame;
use crate::linalg;

/// Outcome of projecting `Γ_B − Γ_A` onto the c-projective change pattern.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectionCheck {
    /// Remainder after fitting `δ^k_i Ψ_j + δ^k_j Ψ_i − J^k_i Ψ̄_j − J^k_j Ψ̄_i`
    /// with independent `Ψ`, `Ψ̄`, relative to `1 + max |Γ_B − Γ_A|`.
    pub remainder: f64,
    /// Remainder with `Ψ̄_i = J^a_i Ψ_a` imposed.
    pub remainder_strict: f64,
    /// Fitted `Ψ` of the strict pattern.
    pub psi: Vec<f64>,
}

/// Whether the Levi-Civita connections of two frames at the same point and
/// with the same `J` differ by a c-projective change.
pub fn cproj_connection_check(a: &MetricFrame, b: &MetricFrame) -> Result<ConnectionCheck> {
    let n = a.dim();
    let ga = a.christoffel()?.gamma.values();
    let gb = b.christoffel()?.gamma.values();
    let j = a.j.values();
    let d: Vec<f64> = gb.iter().zip(&ga).map(|(x, y)| x - y).collect();
    let scale = 1.0 + d.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let delta = |x: usize, y: usize| if x == y { 1.0 } else { 0.0 };

    let mut loose = Vec::with_capacity(n * n * n);
    let mut strict = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for i in 0..n {
            for jj in 0..n {
                let mut row = vec![0.0; 2 * n];
                let mut srow = vec![0.0; n];
                for m in 0..n {
                    let sym = delta(k, i) * delta(jj, m) + delta(k, jj) * delta(i, m);
                    let cpx = j[k * n + i] * delta(jj, m) + j[k * n + jj] * delta(i, m);
                    row[m] = sym;
                    row[n + m] = -cpx;
                    srow[m] = sym - j[m * n + i] * j[k * n + jj] - j[m * n + jj] * j[k * n + i];
                }
                loose.push(row);
                strict.push(srow);
            }
        }
    }
    let fit = linalg::lstsq(&loose, &d)?;
    let sfit = linalg::lstsq(&strict, &d)?;
    Ok(ConnectionCheck {
        remainder: fit.residual_max / scale,
        remainder_strict: sfit.residual_max / scale,
        psi: sfit.x,
    })
}
