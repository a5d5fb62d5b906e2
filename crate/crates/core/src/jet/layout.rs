use std::collections::HashMap;
use std::sync::OnceLock;

use super::{factorial, MAX_ORDER, MAX_VARS};
use crate::error::{Error, Result};

/// Exponents of a monomial, zero-padded to [`MAX_VARS`] entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub [u8; MAX_VARS]);

impl MultiIndex {
    pub fn from_slice(alpha: &[usize], nvars: usize) -> Result<Self> {
        if alpha.len() > nvars && alpha[nvars..].iter().any(|&a| a != 0) {
            return Err(Error::VariableOutOfRange {
                index: alpha.len() - 1,
                nvars,
            });
        }
        let mut m = [0u8; MAX_VARS];
        for (slot, &a) in m.iter_mut().zip(alpha.iter().take(nvars)) {
            *slot = u8::try_from(a).map_err(|_| Error::DegreeTooHigh {
                degree: a,
                order: MAX_ORDER,
            })?;
        }
        Ok(MultiIndex(m))
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&a| a as usize).sum()
    }

    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&a| factorial(a as usize)).product()
    }
}

pub(crate) struct Layout {
    pub indices: Vec<MultiIndex>,
    lookup: HashMap<MultiIndex, usize>,
    /// Triples `(i, j, k)` with `m_i + m_j = m_k`, sorted by `k`.
    pub mul: Vec<(u16, u16, u16)>,
    /// Per variable: `(src, dst, factor)` mapping order-p coefficients to
    /// the order-(p-1) coefficients of the partial derivative.
    pub deriv: Vec<Vec<(u16, u16, f64)>>,
}

impl Layout {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn position(&self, mi: &MultiIndex) -> usize {
        self.lookup[mi]
    }

    fn build(nvars: usize, order: usize) -> Self {
        let mut indices = Vec::new();
        for degree in 0..=order {
            let mut cur = [0u8; MAX_VARS];
            push_degree(nvars, degree, 0, &mut cur, &mut indices);
        }
        let lookup: HashMap<_, _> = indices.iter().enumerate().map(|(i, m)| (*m, i)).collect();

        let mut mul = Vec::new();
        for (k, mk) in indices.iter().enumerate() {
            for (i, mi) in indices.iter().enumerate() {
                if (0..MAX_VARS).all(|v| mi.0[v] <= mk.0[v]) {
                    let mut mj = [0u8; MAX_VARS];
                    for v in 0..MAX_VARS {
                        mj[v] = mk.0[v] - mi.0[v];
                    }
                    let j = lookup[&MultiIndex(mj)];
                    mul.push((i as u16, j as u16, k as u16));
                }
            }
        }

        let mut deriv = vec![Vec::new(); nvars];
        if order > 0 {
            for (var, table) in deriv.iter_mut().enumerate() {
                for (dst, m) in indices.iter().enumerate() {
                    if m.degree() >= order {
                        continue;
                    }
                    let mut up = m.0;
                    up[var] += 1;
                    let src = lookup[&MultiIndex(up)];
                    table.push((src as u16, dst as u16, up[var] as f64));
                }
            }
        }
        Layout {
            indices,
            lookup,
            mul,
            deriv,
        }
    }
}

/// Lexicographic (first variable highest) enumeration of one degree.
fn push_degree(
    nvars: usize,
    remaining: usize,
    var: usize,
    cur: &mut [u8; MAX_VARS],
    out: &mut Vec<MultiIndex>,
) {
    if var == nvars - 1 {
        cur[var] = remaining as u8;
        out.push(MultiIndex(*cur));
        cur[var] = 0;
        return;
    }
    for a in (0..=remaining).rev() {
        cur[var] = a as u8;
        push_degree(nvars, remaining - a, var + 1, cur, out);
    }
    cur[var] = 0;
}

static LAYOUTS: [[OnceLock<Layout>; MAX_ORDER + 1]; MAX_VARS] =
    [const { [const { OnceLock::new() }; MAX_ORDER + 1] }; MAX_VARS];

pub(crate) fn layout(nvars: usize, order: usize) -> &'static Layout {
    LAYOUTS[nvars - 1][order].get_or_init(|| Layout::build(nvars, order))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_are_binomial() {
        assert_eq!(layout(4, 4).len(), 70);
        assert_eq!(layout(1, 4).len(), 5);
        assert_eq!(layout(2, 2).len(), 6);
    }

    #[test]
    fn lower_orders_are_prefixes() {
        let hi = layout(3, 4);
        let lo = layout(3, 2);
        assert_eq!(&hi.indices[..lo.len()], &lo.indices[..]);
    }

    #[test]
    fn graded_lex_order() {
        let l = layout(2, 2);
        let got: Vec<[u8; 2]> = l.indices.iter().map(|m| [m.0[0], m.0[1]]).collect();
        assert_eq!(got, vec![[0, 0], [1, 0], [0, 1], [2, 0], [1, 1], [0, 2]]);
    }
}
