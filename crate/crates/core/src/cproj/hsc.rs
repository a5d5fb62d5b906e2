use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{self, CaseSpec, Point};
use crate::geometry::{hsc, riemann};

/// Relative rounding error allowed on the curvature terms, a few thousand ulp.
pub const ROUNDING_FLOOR: f64 = 1e-12;

/// Two (point, direction) pairs with different HSC.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HscWitness {
    pub p: Point,
    pub v: [f64; 4],
    pub value: f64,
    pub q: Point,
    pub w: [f64; 4],
    pub other: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HscClassification {
    pub constant: bool,
    pub mean: f64,
    pub spread: f64,
    pub values: Vec<f64>,
    /// Largest size of the curvature terms entering a sampled HSC, i.e. the
    /// scale its rounding error is relative to.
    pub term_scale: f64,
    pub witness: Option<HscWitness>,
}

/// Sample `pairs` (point, direction) pairs and decide whether the HSC is
/// constant: spread below `tol · (1 + |mean|) + ROUNDING_FLOOR · term_scale`.
///
/// `term_scale` is `max|g| |v|⁴ (max|∂Γ| + max|Γ|²) / g(v, v)²`; without the
/// floor a zero HSC assembled from large metric entries reads as
/// non-constant.
/// Directions with `|g(v, v)| < 0.01 |v|² max|g|` are redrawn: dividing by
/// `g(v, v)²` there turns curvature rounding into a visible spread on
/// indefinite metrics.
pub fn hsc_classify(spec: &CaseSpec, pairs: usize, seed: u64, tol: f64) -> Result<HscClassification> {
    let points = families::sample_points(spec, pairs, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut samples: Vec<(Point, [f64; 4], f64)> = Vec::with_capacity(pairs);
    let mut term_scale = 0.0_f64;
    for p in points {
        let frame = families::build_frame(spec, &p, 2)?;
        let conn = frame.christoffel()?;
        let curv = riemann(&conn)?;
        let gamma_max = conn.gamma.comps().iter().fold(0.0_f64, |m, c| m.max(c.value().abs()));
        let dgamma_max = conn
            .gamma
            .comps()
            .iter()
            .flat_map(|c| c.gradient())
            .fold(0.0_f64, |m, x| m.max(x.abs()));
        let g = frame.g.values();
        let gmax = g.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let mut found = None;
        for _ in 0..200 {
            let mut v = [0.0; 4];
            for c in v.iter_mut() {
                *c = rng.gen_range(-1.0..1.0);
            }
            if !well_conditioned(&g, &v) {
                continue;
            }
            match hsc(&frame, &curv, &v) {
                Ok(k) => {
                    let vv: f64 = v.iter().map(|x| x * x).sum();
                    let gvv = quad(&g, &v);
                    term_scale = term_scale.max(gmax * vv * vv * (dgamma_max + gamma_max * gamma_max) / (gvv * gvv));
                    found = Some((v, k));
                    break;
                }
                Err(Error::Singular(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        let (v, k) = found.ok_or_else(|| Error::SamplingExhausted(format!("{p:?}: only null directions")))?;
        samples.push((p, v, k));
    }
    let values: Vec<f64> = samples.iter().map(|s| s.2).collect();
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let (imin, imax) = (0..values.len()).fold((0, 0), |(a, b), i| {
        (
            if values[i] < values[a] { i } else { a },
            if values[i] > values[b] { i } else { b },
        )
    });
    let spread = values[imax] - values[imin];
    let constant = spread < tol * (1.0 + mean.abs()) + ROUNDING_FLOOR * term_scale;
    let witness = (!constant).then(|| HscWitness {
        p: samples[imin].0,
        v: samples[imin].1,
        value: samples[imin].2,
        q: samples[imax].0,
        w: samples[imax].1,
        other: samples[imax].2,
    });
    Ok(HscClassification {
        constant,
        mean,
        spread,
        values,
        term_scale,
        witness,
    })
}

fn quad(g: &[f64], v: &[f64; 4]) -> f64 {
    (0..4)
        .map(|i| (0..4).map(|j| g[i * 4 + j] * v[i] * v[j]).sum::<f64>())
        .sum()
}

fn well_conditioned(g: &[f64], v: &[f64; 4]) -> bool {
    let gvv = quad(g, v);
    let gmax = g.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let vv: f64 = v.iter().map(|x| x * x).sum();
    gvv.abs() >= 0.01 * vv * gmax
}
