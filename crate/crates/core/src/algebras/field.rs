use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jet::Jet;

type Eval = dyn Fn(&[Jet]) -> Result<Vec<Jet>> + Send + Sync;

/// A coordinate vector field: components as functions of the coordinate
/// jets, plus a printable label.
#[derive(Clone)]
pub struct VectorFieldExpr {
    pub label: String,
    dim: usize,
    eval: Arc<Eval>,
}

impl fmt::Debug for VectorFieldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorFieldExpr({})", self.label)
    }
}

impl VectorFieldExpr {
    pub fn new(
        label: impl Into<String>,
        dim: usize,
        eval: impl Fn(&[Jet]) -> Result<Vec<Jet>> + Send + Sync + 'static,
    ) -> Self {
        VectorFieldExpr {
            label: label.into(),
            dim,
            eval: Arc::new(eval),
        }
    }

    /// Field with constant components.
    pub fn constant(label: impl Into<String>, comps: Vec<f64>) -> Self {
        let dim = comps.len();
        VectorFieldExpr::new(label, dim, move |x| {
            Ok(comps
                .iter()
                .map(|&c| Jet::constant(c, x[0].nvars(), x[0].order()))
                .collect())
        })
    }

    /// Coordinate field `∂_k`.
    pub fn coordinate(label: impl Into<String>, dim: usize, k: usize) -> Self {
        let mut comps = vec![0.0; dim];
        comps[k] = 1.0;
        VectorFieldExpr::constant(label, comps)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Components evaluated on coordinate jets.
    pub fn eval(&self, x: &[Jet]) -> Result<Vec<Jet>> {
        if x.len() != self.dim {
            return Err(Error::Other(format!(
                "{}: expected {} coordinates, got {}",
                self.label,
                self.dim,
                x.len()
            )));
        }
        let v = (self.eval)(x)?;
        if v.len() != self.dim {
            return Err(Error::Other(format!("{}: wrong component count", self.label)));
        }
        Ok(v)
    }

    /// Components as jets of the given order at `p`.
    pub fn at(&self, p: &[f64], order: usize) -> Result<Vec<Jet>> {
        self.eval(&Jet::seed_point(p, order)?)
    }

    /// Component values at `p`.
    pub fn values(&self, p: &[f64]) -> Result<Vec<f64>> {
        Ok(self.at(p, 0)?.iter().map(Jet::value).collect())
    }

    pub fn scaled(&self, c: f64) -> Self {
        let inner = self.clone();
        VectorFieldExpr::new(format!("{c}·({})", self.label), self.dim, move |x| {
            Ok(inner.eval(x)?.iter().map(|j| j.scale(c)).collect())
        })
    }

    pub fn plus(&self, other: &VectorFieldExpr) -> Self {
        let (a, b) = (self.clone(), other.clone());
        VectorFieldExpr::new(format!("{} + {}", self.label, other.label), self.dim, move |x| {
            let (u, w) = (a.eval(x)?, b.eval(x)?);
            Ok(u.iter().zip(&w).map(|(p, q)| p + q).collect())
        })
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}
