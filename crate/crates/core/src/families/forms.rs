//! Accumulators turning sums of symmetric products and wedge products of
//! (possibly complex) 1-forms into real component matrices.

use crate::jet::{ComplexJet, Jet};

/// Real `n × n` component matrix built from 1-form products.
pub(crate) struct RealForms {
    n: usize,
    m: Vec<Jet>,
}

impl RealForms {
    pub fn new(n: usize, nvars: usize, order: usize) -> Self {
        RealForms {
            n,
            m: vec![Jet::zero(nvars, order); n * n],
        }
    }

    /// Add `c · αβ` with `αβ = ½(α⊗β + β⊗α)`.
    pub fn sym(&mut self, c: &Jet, a: &[Jet], b: &[Jet]) {
        for i in 0..self.n {
            for j in 0..self.n {
                let t = &a[i] * &b[j] + &a[j] * &b[i];
                if t.max_abs() != 0.0 {
                    self.m[i * self.n + j] += (c * &t).scale(0.5);
                }
            }
        }
    }

    /// Add `c · α∧β` with `α∧β = α⊗β − β⊗α`.
    pub fn wedge(&mut self, c: &Jet, a: &[Jet], b: &[Jet]) {
        for i in 0..self.n {
            for j in 0..self.n {
                let t = &a[i] * &b[j] - &a[j] * &b[i];
                if t.max_abs() != 0.0 {
                    self.m[i * self.n + j] += c * &t;
                }
            }
        }
    }

    pub fn finish(self) -> Vec<Jet> {
        self.m
    }
}

/// Complex accumulator whose real part is the tensor of interest; the
/// imaginary part must cancel and is reported as a residual.
pub(crate) struct ComplexForms {
    n: usize,
    m: Vec<ComplexJet>,
}

impl ComplexForms {
    pub fn new(n: usize, nvars: usize, order: usize) -> Self {
        let zero = ComplexJet::from_real(Jet::zero(nvars, order));
        ComplexForms {
            n,
            m: vec![zero; n * n],
        }
    }

    pub fn sym(&mut self, c: &ComplexJet, a: &[ComplexJet], b: &[ComplexJet]) {
        for i in 0..self.n {
            for j in 0..self.n {
                let t = &(&a[i] * &b[j]) + &(&a[j] * &b[i]);
                if t.max_abs() != 0.0 {
                    let k = i * self.n + j;
                    self.m[k] = &self.m[k] + &(c * &t).scale(0.5.into());
                }
            }
        }
    }

    pub fn wedge(&mut self, c: &ComplexJet, a: &[ComplexJet], b: &[ComplexJet]) {
        for i in 0..self.n {
            for j in 0..self.n {
                let t = &(&a[i] * &b[j]) - &(&a[j] * &b[i]);
                if t.max_abs() != 0.0 {
                    let k = i * self.n + j;
                    self.m[k] = &self.m[k] + &(c * &t);
                }
            }
        }
    }

    /// Real parts and the largest imaginary coefficient relative to the
    /// largest real one.
    pub fn finish(self) -> (Vec<Jet>, f64) {
        let re_scale = self.m.iter().fold(0.0_f64, |s, c| s.max(c.re.max_abs()));
        let im = self.m.iter().fold(0.0_f64, |s, c| s.max(c.im.max_abs()));
        let re = self.m.into_iter().map(|c| c.re).collect();
        (re, im / (1.0 + re_scale))
    }
}
