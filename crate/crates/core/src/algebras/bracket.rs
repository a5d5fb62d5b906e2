use serde::{Deserialize, Serialize};

use super::{GeneratorSet, VectorFieldExpr};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::linalg;

/// `[v, w]^k = v^i ∂_i w^k − w^i ∂_i v^k` at `p`, as jets of order `order − 1`.
pub fn lie_bracket(v: &VectorFieldExpr, w: &VectorFieldExpr, p: &[f64], order: usize) -> Result<Vec<Jet>> {
    if order == 0 {
        return Err(Error::OrderTooLow { have: 0, need: 1 });
    }
    let (a, b) = (v.at(p, order)?, w.at(p, order)?);
    let n = a.len();
    let low: Vec<Jet> = a.iter().map(|j| j.truncate(order - 1)).collect();
    let lowb: Vec<Jet> = b.iter().map(|j| j.truncate(order - 1)).collect();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = Jet::zero(n, order - 1);
        for i in 0..n {
            acc += &low[i] * &b[k].derivative(i)?;
            acc -= &lowb[i] * &a[k].derivative(i)?;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Coordinates of a point from jets that must be the seeded coordinate
/// functions at that point.
pub(crate) fn seeded_point(x: &[Jet]) -> Result<Vec<f64>> {
    let n = x.len();
    for (i, xi) in x.iter().enumerate() {
        let ok = xi.nvars() == n
            && xi.coeffs().iter().enumerate().skip(1).all(|(pos, &c)| {
                let expected = if pos == i + 1 { 1.0 } else { 0.0 };
                c == expected
            });
        if !ok {
            return Err(Error::Other(
                "field is only defined on coordinate jets".into(),
            ));
        }
    }
    Ok(x.iter().map(Jet::value).collect())
}

/// `[v, w]` as a field of its own; evaluating it to order `k` evaluates
/// `v` and `w` to order `k + 1`.
pub fn bracket_field(v: &VectorFieldExpr, w: &VectorFieldExpr) -> VectorFieldExpr {
    let (a, b) = (v.clone(), w.clone());
    VectorFieldExpr::new(format!("[{}, {}]", v.label, w.label), v.dim(), move |x| {
        let p = seeded_point(x)?;
        lie_bracket(&a, &b, &p, x[0].order() + 1)
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Closure {
    /// `c[i][j][k]`: `[v_i, v_j] = Σ_k c^k_ij v_k`.
    pub constants: Vec<Vec<Vec<f64>>>,
    /// Largest fit remainder over all pairs, relative to `1 + max |[v_i, v_j]|`.
    pub residual: f64,
}

fn stacked_values(fields: &[VectorFieldExpr], points: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    fields
        .iter()
        .map(|v| {
            let mut col = Vec::new();
            for p in points {
                col.extend(v.values(p)?);
            }
            Ok(col)
        })
        .collect()
}

/// Fit the structure constants of `gens` by least squares over the values
/// of the brackets at `points`; only `i < j` is fitted, the rest follows by
/// antisymmetry.
pub fn closure_check(gens: &GeneratorSet, points: &[Vec<f64>]) -> Result<Closure> {
    closure_of(&gens.fields, points)
}

pub fn closure_of(fields: &[VectorFieldExpr], points: &[Vec<f64>]) -> Result<Closure> {
    let m = fields.len();
    if points.len() * fields.first().map_or(0, |f| f.dim()) < m {
        return Err(Error::RankDeficient(format!(
            "{} points cannot separate {m} fields",
            points.len()
        )));
    }
    let cols = stacked_values(fields, points)?;
    let rows: Vec<Vec<f64>> = (0..cols[0].len())
        .map(|r| cols.iter().map(|c| c[r]).collect())
        .collect();
    let mut constants = vec![vec![vec![0.0; m]; m]; m];
    let mut residual = 0.0_f64;
    for i in 0..m {
        for j in (i + 1)..m {
            let mut rhs = Vec::with_capacity(rows.len());
            for p in points {
                let b = lie_bracket(&fields[i], &fields[j], p, 1)?;
                rhs.extend(b.iter().map(Jet::value));
            }
            let scale = 1.0 + rhs.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
            let fit = linalg::lstsq(&rows, &rhs)?;
            residual = residual.max(fit.residual_max / scale);
            for k in 0..m {
                constants[i][j][k] = fit.x[k];
                constants[j][i][k] = -fit.x[k];
            }
        }
    }
    Ok(Closure { constants, residual })
}

/// Largest value of the cyclic sum `[a,[b,c]] + [b,[c,a]] + [c,[a,b]]` over
/// the given triples and points, relative to the largest single term.
pub fn jacobi_residual(
    fields: &[VectorFieldExpr],
    triples: &[(usize, usize, usize)],
    points: &[Vec<f64>],
) -> Result<f64> {
    let mut worst = 0.0_f64;
    for &(a, b, c) in triples {
        let (fa, fb, fc) = (&fields[a], &fields[b], &fields[c]);
        let terms = [
            (fa, bracket_field(fb, fc)),
            (fb, bracket_field(fc, fa)),
            (fc, bracket_field(fa, fb)),
        ];
        for p in points {
            let mut sum = vec![0.0; fa.dim()];
            let mut scale = 1.0_f64;
            for (x, inner) in &terms {
                let v = lie_bracket(x, inner, p, 1)?;
                for (s, j) in sum.iter_mut().zip(&v) {
                    *s += j.value();
                    scale = scale.max(j.value().abs());
                }
            }
            let r = sum.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
            worst = worst.max(r / scale);
        }
    }
    Ok(worst)
}

/// Killing form `B_ij = tr(ad_i ad_j)` of fitted structure constants.
pub fn killing_form(c: &[Vec<Vec<f64>>]) -> Vec<Vec<f64>> {
    let m = c.len();
    let mut b = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in 0..m {
            // (ad_i)^k_l = c^k_il
            let mut tr = 0.0;
            for k in 0..m {
                for l in 0..m {
                    tr += c[i][l][k] * c[j][k][l];
                }
            }
            b[i][j] = tr;
        }
    }
    b
}

/// Number of linearly independent fields: numerical rank (relative
/// threshold `1e-8`) of the matrix whose row `i` holds the values and first
/// derivatives of field `i` at all points.
pub fn dimension_check(gens: &GeneratorSet, points: &[Vec<f64>]) -> Result<usize> {
    dimension_of(&gens.fields, points)
}

pub fn dimension_of(fields: &[VectorFieldExpr], points: &[Vec<f64>]) -> Result<usize> {
    let rows = fields
        .iter()
        .map(|v| {
            let mut row = Vec::new();
            for p in points {
                for j in v.at(p, 1)? {
                    row.extend_from_slice(j.coeffs());
                }
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(linalg::numerical_rank(&rows, 1e-8))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_of_translation_and_scaling() {
        let dy = VectorFieldExpr::coordinate("∂y", 2, 1);
        let w = VectorFieldExpr::new("∂x + y∂y", 2, |x| {
            Ok(vec![Jet::constant(1.0, 2, x[0].order()), x[1].clone()])
        });
        let b = lie_bracket(&dy, &w, &[0.3, -0.7], 2).unwrap();
        assert!((b[0].value()).abs() < 1e-15);
        assert!((b[1].value() - 1.0).abs() < 1e-15);
        assert_eq!(b[0].order(), 1);
    }

    #[test]
    fn bracket_field_rejects_general_jets() {
        let dy = VectorFieldExpr::coordinate("∂y", 2, 1);
        let f = bracket_field(&dy, &dy);
        let x = Jet::seed_point(&[0.1, 0.2], 1).unwrap();
        assert!(f.eval(&x).is_ok());
        let bad = vec![x[0].scale(2.0), x[1].clone()];
        assert!(f.eval(&bad).is_err());
    }
}
