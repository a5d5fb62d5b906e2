//! Small dense linear algebra: jet-valued matrix inversion and determinants,
//! plus real least-squares and rank helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::jet::Jet;

/// Invert a row-major `n × n` jet matrix by Gauss-Jordan elimination,
/// pivoting on the constant terms.
pub fn invert(m: &[Jet], n: usize) -> Result<Vec<Jet>> {
    assert_eq!(m.len(), n * n, "matrix size");
    let scale = m.iter().fold(0.0_f64, |s, x| s.max(x.value().abs()));
    let (nvars, order) = (m[0].nvars(), m[0].order());
    let mut a = m.to_vec();
    let mut inv: Vec<Jet> = (0..n * n)
        .map(|k| Jet::constant(if k / n == k % n { 1.0 } else { 0.0 }, nvars, order))
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| {
                a[r * n + col]
                    .value()
                    .abs()
                    .total_cmp(&a[s * n + col].value().abs())
            })
            .unwrap();
        if a[pivot * n + col].value().abs() <= 1e-12 * scale.max(1e-300) {
            return Err(Error::Singular("degenerate jet matrix".into()));
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
                inv.swap(pivot * n + k, col * n + k);
            }
        }
        let p = a[col * n + col].recip()?;
        for k in 0..n {
            a[col * n + k] = &a[col * n + k] * &p;
            inv[col * n + k] = &inv[col * n + k] * &p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r * n + col].clone();
            if f.max_abs() == 0.0 {
                continue;
            }
            for k in 0..n {
                a[r * n + k] = &a[r * n + k] - &(&f * &a[col * n + k]);
                inv[r * n + k] = &inv[r * n + k] - &(&f * &inv[col * n + k]);
            }
        }
    }
    Ok(inv)
}

/// Determinant of a row-major `n × n` jet matrix by cofactor expansion
/// (n ≤ 4 keeps this cheap and division free).
pub fn determinant(m: &[Jet], n: usize) -> Jet {
    assert_eq!(m.len(), n * n, "matrix size");
    let rows: Vec<usize> = (0..n).collect();
    let cols: Vec<usize> = (0..n).collect();
    minor_det(m, n, &rows, &cols)
}

fn minor_det(m: &[Jet], n: usize, rows: &[usize], cols: &[usize]) -> Jet {
    if rows.len() == 1 {
        return m[rows[0] * n + cols[0]].clone();
    }
    let r0 = rows[0];
    let sub_rows = &rows[1..];
    let mut acc = Jet::zero(m[0].nvars(), m[0].order());
    for (idx, &c) in cols.iter().enumerate() {
        let entry = &m[r0 * n + c];
        if entry.max_abs() == 0.0 {
            continue;
        }
        let sub_cols: Vec<usize> = cols.iter().copied().filter(|&k| k != c).collect();
        let term = entry * &minor_det(m, n, sub_rows, &sub_cols);
        if idx % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Solution of a real least-squares problem together with diagnostics.
#[derive(Clone, Debug)]
pub struct LstsqFit {
    pub x: Vec<f64>,
    /// Euclidean norm of `A x - b`.
    pub residual_norm: f64,
    /// Largest absolute entry of `A x - b`.
    pub residual_max: f64,
    pub condition: f64,
    pub rank: usize,
}

/// Minimise `|A x - b|` via SVD. `rows` are the rows of `A`.
pub fn lstsq(rows: &[Vec<f64>], b: &[f64]) -> Result<LstsqFit> {
    let m = rows.len();
    let n = rows.first().map_or(0, |r| r.len());
    if m == 0 || n == 0 || b.len() != m {
        return Err(Error::RankDeficient("empty least-squares system".into()));
    }
    let a = DMatrix::from_fn(m, n, |i, j| rows[i][j]);
    let rhs = DVector::from_column_slice(b);
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let tol = 1e-12 * smax.max(1e-300);
    let rank = svd.singular_values.iter().filter(|&&s| s > tol).count();
    let x = svd
        .solve(&rhs, tol)
        .map_err(|e| Error::RankDeficient(e.to_string()))?;
    let r = &a * &x - &rhs;
    Ok(LstsqFit {
        x: x.iter().copied().collect(),
        residual_norm: r.norm(),
        residual_max: r.amax(),
        condition: if smin > 0.0 { smax / smin } else { f64::INFINITY },
        rank,
    })
}

/// Singular values of a dense real matrix given by rows.
pub fn singular_values(rows: &[Vec<f64>]) -> Vec<f64> {
    let m = rows.len();
    let n = rows.first().map_or(0, |r| r.len());
    if m == 0 || n == 0 {
        return Vec::new();
    }
    let a = DMatrix::from_fn(m, n, |i, j| rows[i][j]);
    let mut s: Vec<f64> = a.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank: singular values above `rel_tol · σ_max`.
pub fn numerical_rank(rows: &[Vec<f64>], rel_tol: f64) -> usize {
    let s = singular_values(rows);
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > rel_tol * smax).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn jet_inverse_round_trips() {
        let p = Jet::seed_point(&[0.3, -0.2], 3).unwrap();
        let (x, y) = (&p[0], &p[1]);
        let m = vec![
            x.exp(),
            x * y,
            x * y,
            y.cos().add_scalar(1.0),
        ];
        let inv = invert(&m, 2).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Jet::zero(2, 3);
                for k in 0..2 {
                    acc += &m[i * 2 + k] * &inv[k * 2 + j];
                }
                let want = if i == j { 1.0 } else { 0.0 };
                assert_relative_eq!(acc.value(), want, epsilon = 1e-14);
                assert!(acc.coeffs()[1..].iter().all(|c| c.abs() < 1e-13));
            }
        }
    }

    #[test]
    fn determinant_matches_product_of_diagonal() {
        let p = Jet::seed_point(&[1.0, 2.0, 3.0], 2).unwrap();
        let z = Jet::zero(3, 2);
        let m = vec![
            p[0].clone(), p[1].clone(), p[2].clone(),
            z.clone(), p[1].clone(), p[0].clone(),
            z.clone(), z.clone(), p[2].clone(),
        ];
        let d = determinant(&m, 3);
        let want = &(&p[0] * &p[1]) * &p[2];
        assert!((&d - &want).max_abs() < 1e-14);
    }

    #[test]
    fn singular_matrix_rejected() {
        let one = Jet::constant(1.0, 1, 1);
        let m = vec![one.clone(), one.clone(), one.clone(), one];
        assert!(matches!(invert(&m, 2), Err(Error::Singular(_))));
    }

    #[test]
    fn lstsq_recovers_exact_solution() {
        let rows = vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![1.0, 1.0]];
        let b = vec![1.0, 4.0, 3.0];
        let fit = lstsq(&rows, &b).unwrap();
        assert_relative_eq!(fit.x[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(fit.x[1], 2.0, epsilon = 1e-12);
        assert!(fit.residual_norm < 1e-12);
        assert_eq!(fit.rank, 2);
        assert_eq!(numerical_rank(&rows, 1e-8), 2);
    }
}
