//! Random composite expressions and a finite-difference cross-check of
//! their jets.
//!
//! A direct central difference of order 4 with step `1e-5` loses every
//! digit in `f64`, so the partial `∂^α f` taken from the jet is compared
//! with the central difference, in one variable `i` with `α_i > 0`, of the
//! jet partial `∂^{α − e_i} f` evaluated at `p ± h e_i`. Order 1 is thus an
//! ordinary difference of function values.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Jet, MAX_VARS};
use crate::error::Result;

/// An expression over the elementary set. The unary forms are wrapped so
/// that any argument stays inside the function's domain.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Var(usize),
    Const(f64),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// `a / (2 + sin b)`
    Div(Box<Expr>, Box<Expr>),
    /// `exp(e / 2)`
    Exp(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    /// `tan(0.4 sin e)`
    Tan(Box<Expr>),
    /// `sqrt(1 + e²)`
    Sqrt(Box<Expr>),
    /// `ln(2 + cos e)`
    Ln(Box<Expr>),
    /// `(1.5 + sin e)^r`
    Pow(Box<Expr>, f64),
}

impl Expr {
    /// A random expression in `nvars` variables with at most `depth` levels
    /// of nesting.
    pub fn random(rng: &mut impl Rng, nvars: usize, depth: usize) -> Expr {
        if depth == 0 || rng.gen_bool(0.2) {
            return if rng.gen_bool(0.8) {
                Expr::Var(rng.gen_range(0..nvars))
            } else {
                Expr::Const((rng.gen_range(-2.0..2.0_f64) * 100.0).round() / 100.0)
            };
        }
        let mut sub = || Box::new(Expr::random(rng, nvars, depth - 1));
        let (a, b) = (sub(), sub());
        match rng.gen_range(0..11) {
            0 => Expr::Add(a, b),
            1 => Expr::Mul(a, b),
            2 => Expr::Div(a, b),
            3 => Expr::Exp(a),
            4 => Expr::Sin(a),
            5 => Expr::Cos(a),
            6 => Expr::Tan(a),
            7 => Expr::Sqrt(a),
            8 => Expr::Ln(a),
            9 => Expr::Pow(a, [-1.5, -0.5, 0.5, 1.5, 2.5][rng.gen_range(0..5)]),
            _ => Expr::Mul(a, Box::new(Expr::Sin(b))),
        }
    }

    pub fn eval(&self, x: &[Jet]) -> Result<Jet> {
        Ok(match self {
            Expr::Var(i) => x[*i].clone(),
            Expr::Const(c) => Jet::constant(*c, x[0].nvars(), x[0].order()),
            Expr::Add(a, b) => &a.eval(x)? + &b.eval(x)?,
            Expr::Mul(a, b) => &a.eval(x)? * &b.eval(x)?,
            Expr::Div(a, b) => a.eval(x)?.try_div(&b.eval(x)?.sin().add_scalar(2.0))?,
            Expr::Exp(a) => a.eval(x)?.scale(0.5).exp(),
            Expr::Sin(a) => a.eval(x)?.sin(),
            Expr::Cos(a) => a.eval(x)?.cos(),
            Expr::Tan(a) => a.eval(x)?.sin().scale(0.4).tan()?,
            Expr::Sqrt(a) => {
                let e = a.eval(x)?;
                (&e * &e).add_scalar(1.0).sqrt()?
            }
            Expr::Ln(a) => a.eval(x)?.cos().add_scalar(2.0).ln()?,
            Expr::Pow(a, r) => a.eval(x)?.sin().add_scalar(1.5).powf(*r)?,
        })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(i) => write!(f, "x{i}"),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Mul(a, b) => write!(f, "{a}·{b}"),
            Expr::Div(a, b) => write!(f, "{a}/(2 + sin {b})"),
            Expr::Exp(a) => write!(f, "exp({a}/2)"),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
            Expr::Tan(a) => write!(f, "tan(0.4 sin {a})"),
            Expr::Sqrt(a) => write!(f, "sqrt(1 + {a}²)"),
            Expr::Ln(a) => write!(f, "ln(2 + cos {a})"),
            Expr::Pow(a, r) => write!(f, "(1.5 + sin {a})^{r}"),
        }
    }
}

/// Worst disagreement found by [`finite_difference_check`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdReport {
    /// Largest `|jet − fd| / (1 + |jet|)`.
    pub worst: f64,
    pub expression: String,
    pub point: Vec<f64>,
    pub multi_index: Vec<usize>,
    /// Number of partials compared.
    pub compared: usize,
}

/// Compare every partial of order `1..=order` of a jet against central
/// differences with step `h`, at one point.
pub fn compare_partials(
    f: impl Fn(&[Jet]) -> Result<Jet>,
    p: &[f64],
    order: usize,
    h: f64,
) -> Result<(f64, Vec<usize>, usize)> {
    let jet = f(&Jet::seed_point(p, order)?)?;
    let shifted = |i: usize, s: f64| -> Result<Jet> {
        let mut q = p.to_vec();
        q[i] += s;
        f(&Jet::seed_point(&q, order)?)
    };
    let mut plus = Vec::with_capacity(p.len());
    let mut minus = Vec::with_capacity(p.len());
    for i in 0..p.len() {
        plus.push(shifted(i, h)?);
        minus.push(shifted(i, -h)?);
    }
    let (mut worst, mut at, mut n) = (0.0_f64, Vec::new(), 0);
    for mi in jet.multi_indices() {
        let alpha: Vec<usize> = mi.0[..p.len()].iter().map(|&a| a as usize).collect();
        let deg: usize = alpha.iter().sum();
        if deg == 0 {
            continue;
        }
        let i = alpha.iter().position(|&a| a > 0).expect("positive degree");
        let mut lower = alpha.clone();
        lower[i] -= 1;
        let fd = (plus[i].partial(&lower)? - minus[i].partial(&lower)?) / (2.0 * h);
        let exact = jet.partial(&alpha)?;
        let rel = (exact - fd).abs() / (1.0 + exact.abs());
        n += 1;
        if rel > worst {
            worst = rel;
            at = alpha;
        }
    }
    Ok((worst, at, n))
}

/// Check `count` random composites (in 1 to 4 variables, cycling) at random
/// points of `[-1, 1]^n`, all partials up to `order`, step `h`.
pub fn finite_difference_check(count: usize, seed: u64, order: usize, h: f64) -> Result<FdReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = FdReport {
        worst: 0.0,
        expression: String::new(),
        point: Vec::new(),
        multi_index: Vec::new(),
        compared: 0,
    };
    for k in 0..count {
        let nvars = 1 + k % MAX_VARS;
        let expr = Expr::random(&mut rng, nvars, 3);
        let p: Vec<f64> = (0..nvars).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (worst, alpha, n) = compare_partials(|x| expr.eval(x), &p, order, h)?;
        report.compared += n;
        if worst >= report.worst {
            report.worst = worst;
            report.expression = expr.to_string();
            report.point = p;
            report.multi_index = alpha;
        }
    }
    Ok(report)
}
