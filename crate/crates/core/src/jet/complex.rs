use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{factorial, Jet};
use crate::error::{Error, Result};

/// A complex-valued jet `re + i im` over real variables.
///
/// Holomorphic functions of `z = x + iy` are evaluated by composing their
/// complex Taylor series with the jet of `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexJet {
    pub re: Jet,
    pub im: Jet,
}

impl ComplexJet {
    pub fn new(re: Jet, im: Jet) -> Result<Self> {
        if re.nvars() != im.nvars() || re.order() != im.order() {
            return Err(Error::ShapeMismatch(
                re.nvars(),
                re.order(),
                im.nvars(),
                im.order(),
            ));
        }
        Ok(ComplexJet { re, im })
    }

    pub fn from_real(re: Jet) -> Self {
        let im = Jet::zero(re.nvars(), re.order());
        ComplexJet { re, im }
    }

    pub fn constant(c: Complex64, nvars: usize, order: usize) -> Self {
        ComplexJet {
            re: Jet::constant(c.re, nvars, order),
            im: Jet::constant(c.im, nvars, order),
        }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }

    pub fn conj(&self) -> Self {
        ComplexJet {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        ComplexJet {
            re: &self.re * c.re - &self.im * c.im,
            im: &self.re * c.im + &self.im * c.re,
        }
    }

    pub fn add_scalar(&self, c: Complex64) -> Self {
        ComplexJet {
            re: self.re.add_scalar(c.re),
            im: self.im.add_scalar(c.im),
        }
    }

    pub fn try_div(&self, other: &ComplexJet) -> Result<Self> {
        let denom = &other.re * &other.re + &other.im * &other.im;
        let num = self * &other.conj();
        Ok(ComplexJet {
            re: num.re.try_div(&denom)?,
            im: num.im.try_div(&denom)?,
        })
    }

    pub fn recip(&self) -> Result<Self> {
        let one = ComplexJet::constant(Complex64::new(1.0, 0.0), self.re.nvars(), self.re.order());
        one.try_div(self)
    }

    /// Compose with a holomorphic function given by `taylor[k] = f^(k)(a0)/k!`.
    pub fn compose(&self, taylor: &[Complex64]) -> Self {
        let mut delta = self.clone();
        delta.re = delta.re.add_scalar(-self.re.value());
        delta.im = delta.im.add_scalar(-self.im.value());
        let order = self.re.order();
        let nvars = self.re.nvars();
        let top = order.min(taylor.len() - 1);
        let mut acc = ComplexJet::constant(taylor[top], nvars, order);
        for k in (0..top).rev() {
            acc = (&acc * &delta).add_scalar(taylor[k]);
        }
        acc
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        let order = self.re.order();
        let taylor: Vec<_> = (0..=order).map(|k| e / factorial(k)).collect();
        self.compose(&taylor)
    }

    pub fn sin(&self) -> Self {
        let a = self.value();
        let (s, c) = (a.sin(), a.cos());
        let cycle = [s, c, -s, -c];
        let taylor: Vec<_> = (0..=self.re.order())
            .map(|k| cycle[k % 4] / factorial(k))
            .collect();
        self.compose(&taylor)
    }

    pub fn cos(&self) -> Self {
        let a = self.value();
        let (s, c) = (a.sin(), a.cos());
        let cycle = [c, -s, -c, s];
        let taylor: Vec<_> = (0..=self.re.order())
            .map(|k| cycle[k % 4] / factorial(k))
            .collect();
        self.compose(&taylor)
    }

    pub fn tan(&self) -> Result<Self> {
        self.sin().try_div(&self.cos())
    }

    /// Principal branch of `f^r`; the constant term must stay off the
    /// negative real axis.
    pub fn powf(&self, r: f64) -> Result<Self> {
        let a = self.value();
        if a.norm() == 0.0 || (a.im == 0.0 && a.re < 0.0 && r.fract() != 0.0) {
            return Err(Error::Domain(format!("complex pow at branch point {a}")));
        }
        let mut taylor = Vec::with_capacity(self.re.order() + 1);
        let mut binom = 1.0;
        for k in 0..=self.re.order() {
            if k > 0 {
                binom *= (r - (k as f64 - 1.0)) / k as f64;
            }
            taylor.push(a.powf(r - k as f64) * binom);
        }
        Ok(self.compose(&taylor))
    }

    pub fn sqrt(&self) -> Result<Self> {
        self.powf(0.5)
    }

    pub fn max_abs(&self) -> f64 {
        self.re.max_abs().max(self.im.max_abs())
    }
}

impl Add<&ComplexJet> for &ComplexJet {
    type Output = ComplexJet;
    fn add(self, rhs: &ComplexJet) -> ComplexJet {
        ComplexJet {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub<&ComplexJet> for &ComplexJet {
    type Output = ComplexJet;
    fn sub(self, rhs: &ComplexJet) -> ComplexJet {
        ComplexJet {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul<&ComplexJet> for &ComplexJet {
    type Output = ComplexJet;
    fn mul(self, rhs: &ComplexJet) -> ComplexJet {
        ComplexJet {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &ComplexJet {
    type Output = ComplexJet;
    fn neg(self) -> ComplexJet {
        ComplexJet {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl Add for ComplexJet {
    type Output = ComplexJet;
    fn add(self, rhs: ComplexJet) -> ComplexJet {
        &self + &rhs
    }
}

impl Sub for ComplexJet {
    type Output = ComplexJet;
    fn sub(self, rhs: ComplexJet) -> ComplexJet {
        &self - &rhs
    }
}

impl Mul for ComplexJet {
    type Output = ComplexJet;
    fn mul(self, rhs: ComplexJet) -> ComplexJet {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn z_at(x: f64, y: f64, order: usize) -> ComplexJet {
        ComplexJet::new(
            Jet::variable(0, x, 2, order).unwrap(),
            Jet::variable(1, y, 2, order).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn holomorphic_exp_satisfies_cauchy_riemann() {
        let z = z_at(0.3, -0.7, 3);
        let w = z.exp();
        let want = Complex64::new(0.3, -0.7).exp();
        assert_relative_eq!(w.re.value(), want.re, epsilon = 1e-14);
        assert_relative_eq!(w.im.value(), want.im, epsilon = 1e-14);
        // u_x = v_y, u_y = -v_x
        let (ux, uy) = (w.re.partial(&[1, 0]).unwrap(), w.re.partial(&[0, 1]).unwrap());
        let (vx, vy) = (w.im.partial(&[1, 0]).unwrap(), w.im.partial(&[0, 1]).unwrap());
        assert_relative_eq!(ux, vy, epsilon = 1e-14);
        assert_relative_eq!(uy, -vx, epsilon = 1e-14);
    }

    #[test]
    fn tan_matches_complex_tan() {
        let z = z_at(0.4, 0.2, 2);
        let t = z.tan().unwrap();
        let want = Complex64::new(0.4, 0.2).tan();
        assert_relative_eq!(t.re.value(), want.re, epsilon = 1e-14);
        assert_relative_eq!(t.im.value(), want.im, epsilon = 1e-14);
        // d/dz tan z = 1 / cos^2 z, read off from ∂_x
        let d = 1.0 / (Complex64::new(0.4, 0.2).cos().powi(2));
        assert_relative_eq!(t.re.partial(&[1, 0]).unwrap(), d.re, epsilon = 1e-13);
        assert_relative_eq!(t.im.partial(&[1, 0]).unwrap(), d.im, epsilon = 1e-13);
    }

    #[test]
    fn sqrt_squares_back() {
        let z = z_at(0.9, 0.4, 4);
        let c = z.cos();
        let s = c.sqrt().unwrap();
        let back = &s * &s;
        assert!((&back - &c).max_abs() < 1e-13);
    }
}
