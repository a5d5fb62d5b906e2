//! Truncated multivariate Taylor series ("jets").
//!
//! A [`Jet`] stores the Taylor coefficients of a scalar function of up to four
//! real variables around a point, up to a fixed total degree. Coefficients are
//! kept densely over a graded-lexicographic enumeration of multi-indices, so a
//! jet of order `q` is a prefix of the same function's jet of order `p > q`.
//!
//! Coefficients are Taylor coefficients (partial derivative divided by the
//! multi-index factorial); [`Jet::partial`] converts back.

mod complex;
mod layout;
mod ops;
pub mod selfcheck;

pub use complex::ComplexJet;
pub use layout::MultiIndex;

use crate::error::{Error, Result};
use layout::{layout, Layout};

/// Largest supported number of variables.
pub const MAX_VARS: usize = 4;
/// Largest supported truncation order.
pub const MAX_ORDER: usize = 8;
/// Order used by the verification pipeline unless configured otherwise.
pub const DEFAULT_ORDER: usize = 4;

#[derive(Clone, PartialEq)]
pub struct Jet {
    nvars: usize,
    order: usize,
    coeffs: Vec<f64>,
}

impl std::fmt::Debug for Jet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Jet")
            .field("nvars", &self.nvars)
            .field("order", &self.order)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

fn check_shape(nvars: usize, order: usize) -> Result<()> {
    if nvars == 0 || nvars > MAX_VARS || order > MAX_ORDER {
        return Err(Error::Other(format!(
            "unsupported jet shape: nvars={nvars}, order={order}"
        )));
    }
    Ok(())
}

impl Jet {
    pub fn zero(nvars: usize, order: usize) -> Self {
        Self::constant(0.0, nvars, order)
    }

    /// Jet of a constant function.
    ///
    /// # Panics
    /// If the shape exceeds [`MAX_VARS`] / [`MAX_ORDER`].
    pub fn constant(value: f64, nvars: usize, order: usize) -> Self {
        check_shape(nvars, order).expect("jet shape");
        let mut coeffs = vec![0.0; layout(nvars, order).len()];
        coeffs[0] = value;
        Jet {
            nvars,
            order,
            coeffs,
        }
    }

    /// Jet of the coordinate function `x_index` at `x_index = value`.
    pub fn variable(index: usize, value: f64, nvars: usize, order: usize) -> Result<Self> {
        check_shape(nvars, order)?;
        if index >= nvars {
            return Err(Error::VariableOutOfRange { index, nvars });
        }
        let mut jet = Self::constant(value, nvars, order);
        if order >= 1 {
            jet.coeffs[1 + index] = 1.0;
        }
        Ok(jet)
    }

    /// Coordinate jets for every variable at `point`.
    pub fn seed_point(point: &[f64], order: usize) -> Result<Vec<Jet>> {
        let n = point.len();
        (0..n)
            .map(|i| Jet::variable(i, point[i], n, order))
            .collect()
    }

    pub(crate) fn from_coeffs(nvars: usize, order: usize, coeffs: Vec<f64>) -> Self {
        debug_assert_eq!(coeffs.len(), layout(nvars, order).len());
        Jet {
            nvars,
            order,
            coeffs,
        }
    }

    /// Build a jet from explicit Taylor coefficients in graded-lex order.
    pub fn from_taylor_coeffs(nvars: usize, order: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_shape(nvars, order)?;
        let len = layout(nvars, order).len();
        if coeffs.len() != len {
            return Err(Error::Other(format!(
                "expected {len} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(Jet {
            nvars,
            order,
            coeffs,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The constant term, i.e. the function value at the expansion point.
    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    fn layout(&self) -> &'static Layout {
        layout(self.nvars, self.order)
    }

    /// Multi-indices matching [`Jet::coeffs`] position by position.
    pub fn multi_indices(&self) -> &'static [MultiIndex] {
        &self.layout().indices
    }

    /// Taylor coefficient for `alpha` (zero-padded to four entries).
    pub fn coeff(&self, alpha: &[usize]) -> Result<f64> {
        let mi = MultiIndex::from_slice(alpha, self.nvars)?;
        let degree = mi.degree();
        if degree > self.order {
            return Err(Error::DegreeTooHigh {
                degree,
                order: self.order,
            });
        }
        Ok(self.coeffs[self.layout().position(&mi)])
    }

    /// The true partial derivative `∂^alpha f` at the expansion point.
    pub fn partial(&self, alpha: &[usize]) -> Result<f64> {
        let mi = MultiIndex::from_slice(alpha, self.nvars)?;
        Ok(self.coeff(alpha)? * mi.factorial())
    }

    /// First partial derivatives at the expansion point.
    pub fn gradient(&self) -> Vec<f64> {
        if self.order == 0 {
            return vec![0.0; self.nvars];
        }
        self.coeffs[1..=self.nvars].to_vec()
    }

    /// Jet of `∂f/∂x_var`, one order lower.
    pub fn derivative(&self, var: usize) -> Result<Jet> {
        if var >= self.nvars {
            return Err(Error::VariableOutOfRange {
                index: var,
                nvars: self.nvars,
            });
        }
        if self.order == 0 {
            return Err(Error::OrderTooLow { have: 0, need: 1 });
        }
        let lay = self.layout();
        let target = layout(self.nvars, self.order - 1);
        let mut out = vec![0.0; target.len()];
        for &(src, dst, factor) in &lay.deriv[var] {
            out[dst as usize] += factor * self.coeffs[src as usize];
        }
        Ok(Jet::from_coeffs(self.nvars, self.order - 1, out))
    }

    /// Drop all terms above `order`.
    pub fn truncate(&self, order: usize) -> Jet {
        if order >= self.order {
            return self.clone();
        }
        let len = layout(self.nvars, order).len();
        Jet::from_coeffs(self.nvars, order, self.coeffs[..len].to_vec())
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    fn same_shape(&self, other: &Jet) -> Result<()> {
        if self.nvars != other.nvars || self.order != other.order {
            return Err(Error::ShapeMismatch(
                self.nvars,
                self.order,
                other.nvars,
                other.order,
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Jet) -> Result<Jet> {
        self.same_shape(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Jet::from_coeffs(self.nvars, self.order, coeffs))
    }

    pub fn try_sub(&self, other: &Jet) -> Result<Jet> {
        self.same_shape(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Jet::from_coeffs(self.nvars, self.order, coeffs))
    }

    /// Truncated Cauchy product.
    pub fn try_mul(&self, other: &Jet) -> Result<Jet> {
        self.same_shape(other)?;
        let lay = self.layout();
        let mut out = vec![0.0; lay.len()];
        for &(i, j, k) in &lay.mul {
            out[k as usize] += self.coeffs[i as usize] * other.coeffs[j as usize];
        }
        Ok(Jet::from_coeffs(self.nvars, self.order, out))
    }

    /// Truncated quotient; fails when the divisor vanishes at the point.
    pub fn try_div(&self, other: &Jet) -> Result<Jet> {
        self.same_shape(other)?;
        let b0 = other.coeffs[0];
        if b0 == 0.0 || !b0.is_finite() || b0.abs() < 1e-300 {
            return Err(Error::Singular(format!(
                "division by jet with constant term {b0:e}"
            )));
        }
        let lay = self.layout();
        let mut out = self.coeffs.clone();
        // mul is sorted by k, so every c[i] with |i| < |k| is final when used.
        let mut cursor = 0;
        for k in 0..lay.len() {
            while cursor < lay.mul.len() && lay.mul[cursor].2 as usize == k {
                let (i, j, _) = lay.mul[cursor];
                if j != 0 {
                    out[k] -= out[i as usize] * other.coeffs[j as usize];
                }
                cursor += 1;
            }
            out[k] /= b0;
        }
        Ok(Jet::from_coeffs(self.nvars, self.order, out))
    }

    pub fn recip(&self) -> Result<Jet> {
        Jet::constant(1.0, self.nvars, self.order).try_div(self)
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet::from_coeffs(
            self.nvars,
            self.order,
            self.coeffs.iter().map(|c| c * s).collect(),
        )
    }

    pub fn add_scalar(&self, s: f64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += s;
        out
    }

    /// Compose a univariate function given by its Taylor coefficients
    /// `taylor[k] = f^(k)(a0) / k!` around the constant term `a0`.
    pub fn compose(&self, taylor: &[f64]) -> Jet {
        let mut delta = self.clone();
        delta.coeffs[0] = 0.0;
        let top = self.order.min(taylor.len().saturating_sub(1));
        let mut acc = Jet::constant(taylor[top], self.nvars, self.order);
        for k in (0..top).rev() {
            acc = (&acc * &delta).add_scalar(taylor[k]);
        }
        acc
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        let taylor: Vec<f64> = (0..=self.order).map(|k| e / factorial(k)).collect();
        self.compose(&taylor)
    }

    pub fn ln(&self) -> Result<Jet> {
        let a = self.value();
        if !(a > 0.0) {
            return Err(Error::Domain(format!("ln of non-positive value {a:e}")));
        }
        let mut taylor = vec![a.ln()];
        for k in 1..=self.order {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            taylor.push(sign / (k as f64 * a.powi(k as i32)));
        }
        Ok(self.compose(&taylor))
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        let cycle = [s, c, -s, -c];
        let taylor: Vec<f64> = (0..=self.order)
            .map(|k| cycle[k % 4] / factorial(k))
            .collect();
        self.compose(&taylor)
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        let cycle = [c, -s, -c, s];
        let taylor: Vec<f64> = (0..=self.order)
            .map(|k| cycle[k % 4] / factorial(k))
            .collect();
        self.compose(&taylor)
    }

    pub fn tan(&self) -> Result<Jet> {
        let c = self.cos();
        if c.value().abs() < 1e-300 {
            return Err(Error::Domain("tan at a zero of cos".into()));
        }
        self.sin().try_div(&c)
    }

    pub fn sqrt(&self) -> Result<Jet> {
        if !(self.value() > 0.0) {
            return Err(Error::Domain(format!(
                "sqrt of non-positive value {:e}",
                self.value()
            )));
        }
        self.powf(0.5)
    }

    /// Real power `f^r`; non-integer exponents need a positive base.
    pub fn powf(&self, r: f64) -> Result<Jet> {
        let a = self.value();
        let integral = r.fract() == 0.0;
        if a == 0.0 || (!integral && a < 0.0) {
            return Err(Error::Domain(format!("pow({a:e}, {r})")));
        }
        let mut taylor = Vec::with_capacity(self.order + 1);
        let mut binom = 1.0;
        for k in 0..=self.order {
            if k > 0 {
                binom *= (r - (k as f64 - 1.0)) / k as f64;
            }
            taylor.push(binom * a.powf(r - k as f64));
        }
        Ok(self.compose(&taylor))
    }

    /// `|f|^r`, valid on a region where `f` keeps its sign.
    pub fn abs_powf(&self, r: f64) -> Result<Jet> {
        if self.value() < 0.0 {
            (-self).powf(r)
        } else {
            self.powf(r)
        }
    }

    pub fn powi(&self, n: i32) -> Result<Jet> {
        if n >= 0 {
            let mut acc = Jet::constant(1.0, self.nvars, self.order);
            for _ in 0..n {
                acc = &acc * self;
            }
            Ok(acc)
        } else {
            self.powi(-n)?.recip()
        }
    }
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn seeded_variable_layout() {
        let x = Jet::variable(0, 2.0, 1, 2).unwrap();
        assert_eq!(x.coeffs(), &[2.0, 1.0, 0.0]);
        let y = Jet::variable(1, 0.0, 2, 1).unwrap();
        assert_eq!(y.value(), 0.0);
        assert_eq!(y.coeff(&[0, 1]).unwrap(), 1.0);
        assert_eq!(y.coeff(&[1, 0]).unwrap(), 0.0);
        assert!(matches!(
            Jet::variable(4, 1.0, 4, 2),
            Err(Error::VariableOutOfRange { .. })
        ));
    }

    #[test]
    fn square_and_self_quotient() {
        let x = Jet::variable(0, 2.0, 1, 2).unwrap();
        let sq = &x * &x;
        assert_eq!(sq.coeffs(), &[4.0, 4.0, 1.0]);
        let a = (&x.exp() + &x.sin()).add_scalar(0.5);
        let one = a.try_div(&a).unwrap();
        assert_relative_eq!(one.value(), 1.0, epsilon = 1e-15);
        assert!(one.coeffs()[1..].iter().all(|c| c.abs() < 1e-14));
    }

    #[test]
    fn division_by_vanishing_constant_fails() {
        let x = Jet::variable(0, 0.0, 1, 3).unwrap();
        assert!(matches!(
            Jet::constant(1.0, 1, 3).try_div(&x),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn elementary_values() {
        let x = Jet::variable(0, 0.0, 1, 3).unwrap();
        let e = x.exp();
        for (c, want) in e.coeffs().iter().zip([1.0, 1.0, 0.5, 1.0 / 6.0]) {
            assert_relative_eq!(*c, want, epsilon = 1e-15);
        }
        let four = Jet::constant(4.0, 2, 3);
        let two = four.sqrt().unwrap();
        assert_eq!(two.value(), 2.0);
        assert!(two.coeffs()[1..].iter().all(|c| *c == 0.0));
        assert!(Jet::constant(-1.0, 1, 2).ln().is_err());
        assert!(Jet::constant(-1.0, 1, 2).sqrt().is_err());
        assert!(Jet::constant(-2.0, 1, 2).powf(0.3).is_err());
        assert!(Jet::constant(-2.0, 1, 2).powf(3.0).is_ok());
    }

    #[test]
    fn partials() {
        let x = Jet::variable(0, 3.0, 1, 2).unwrap();
        assert_eq!((&x * &x).partial(&[2]).unwrap(), 2.0);
        let z = Jet::variable(0, 0.0, 1, 4).unwrap();
        assert_relative_eq!(z.exp().partial(&[3]).unwrap(), 1.0, epsilon = 1e-14);
        let a = Jet::variable(0, 1.0, 2, 2).unwrap();
        let b = Jet::variable(1, 1.0, 2, 2).unwrap();
        assert_eq!((&a * &b).partial(&[1, 1]).unwrap(), 1.0);
        assert!(matches!(
            a.partial(&[2, 1]),
            Err(Error::DegreeTooHigh { .. })
        ));
    }

    #[test]
    fn derivative_lowers_order() {
        let x = Jet::variable(0, 0.3, 2, 4).unwrap();
        let y = Jet::variable(1, -0.2, 2, 4).unwrap();
        let f = (&x * &y).exp();
        let fx = f.derivative(0).unwrap();
        assert_eq!(fx.order(), 3);
        // ∂x e^{xy} = y e^{xy}
        let want = (&y * &f).truncate(3);
        for (a, b) in fx.coeffs().iter().zip(want.coeffs()) {
            assert_relative_eq!(*a, *b, epsilon = 1e-14);
        }
    }

    #[test]
    fn mismatched_shapes_are_errors() {
        let a = Jet::constant(1.0, 2, 3);
        let b = Jet::constant(1.0, 2, 2);
        assert!(matches!(a.try_add(&b), Err(Error::ShapeMismatch(..))));
        let c = Jet::constant(1.0, 3, 3);
        assert!(a.try_mul(&c).is_err());
    }

    #[test]
    fn abs_pow_uses_magnitude() {
        let x = Jet::variable(0, -2.0, 1, 3).unwrap();
        let p = x.abs_powf(0.5).unwrap();
        assert_relative_eq!(p.value(), 2f64.sqrt(), epsilon = 1e-15);
        // d/dx |x|^{1/2} = -1/(2 sqrt|x|) for x < 0
        assert_relative_eq!(p.partial(&[1]).unwrap(), -0.5 / 2f64.sqrt(), epsilon = 1e-14);
    }
}
