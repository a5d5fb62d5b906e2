//! Seeded rejection sampling of regular points.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::profiles::{
    complex_profile, conformal_exponent, degenerate_profile, g_function, liouville_profile,
};
use super::spec::{CaseSpec, Family, Resolved};
use super::Point;
use crate::error::{Error, Result};
use crate::jet::{ComplexJet, Jet};

/// Distance every emitted point keeps from the singular loci.
pub const MARGIN: f64 = 0.05;

#[derive(Clone, Debug, PartialEq)]
pub struct Sampler {
    pub seed: u64,
    /// Per-coordinate sampling interval.
    pub bounds: [(f64, f64); 4],
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            seed,
            bounds: [(-1.5, 1.5); 4],
        }
    }

    /// Draw `n` regular points for `spec`; fails once more than 99% of the
    /// candidates have been rejected.
    pub fn sample(&self, spec: &CaseSpec, n: usize) -> Result<Vec<Point>> {
        let r = spec.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out = Vec::with_capacity(n);
        let max_tries = 100 * n.max(1);
        let mut tries = 0;
        while out.len() < n {
            if tries >= max_tries {
                return Err(Error::SamplingExhausted(format!(
                    "{}: {} of {tries} candidates regular",
                    spec.family,
                    out.len()
                )));
            }
            tries += 1;
            let mut p = [0.0; 4];
            for (c, &(lo, hi)) in p.iter_mut().zip(&self.bounds) {
                *c = rng.gen_range(lo..hi);
            }
            if regular(spec.family, &r, &p) {
                out.push(p);
            }
        }
        Ok(out)
    }
}

/// `n` regular points drawn with the default box.
pub fn sample_points(spec: &CaseSpec, n: usize, seed: u64) -> Result<Vec<Point>> {
    Sampler::new(seed).sample(spec, n)
}

/// Whether `p` keeps the margin from every singular locus of the family.
pub fn is_regular(spec: &CaseSpec, p: &Point) -> bool {
    match spec.validate() {
        Ok(r) => regular(spec.family, &r, p),
        Err(_) => false,
    }
}

fn regular(fam: Family, r: &Resolved, p: &Point) -> bool {
    check(fam, r, p).unwrap_or(false)
}

fn away(v: f64) -> bool {
    v.is_finite() && v.abs() > MARGIN
}

fn check(fam: Family, r: &Resolved, p: &Point) -> Result<bool> {
    let x = Jet::seed_point(p, 0)?;
    if fam.is_liouville() {
        if fam == Family::L4 && !(away(p[0].cos()) && away(p[1].cos())) {
            return Ok(false);
        }
        let r0 = liouville_profile(fam, r, 0, &x[0])?.rho.value();
        let r1 = liouville_profile(fam, r, 1, &x[1])?.rho.value();
        Ok(away(r0 - r1) && away(r0) && away(r1))
    } else if fam.is_complex() {
        let z = Complex64::new(p[0], p[1]);
        if fam == Family::C4 && !away(z.cos().norm()) {
            return Ok(false);
        }
        let zj = ComplexJet::new(x[0].clone(), x[1].clone())?;
        let rho = complex_profile(fam, r, &zj)?.rho.value();
        Ok(away(rho.im) && away(rho.norm()))
    } else if fam.is_degenerate() {
        // ρ = 1/x0 and F ∝ |x0|^{-1/2}: stay in the chart x0 > 0, since the
        // constant B of the Sinjukov system differs in sign between charts.
        if matches!(fam, Family::D1 | Family::D3) && p[0] <= MARGIN {
            return Ok(false);
        }
        let rho = degenerate_profile(fam, r, &x[0])?.rho.value();
        let g = g_function(r.g, conformal_exponent(fam, r), &x[3])?.value();
        Ok(g.is_finite() && g > MARGIN && away(rho) && away(rho - 1.0))
    } else if fam.is_constant_hsc_model() {
        let sigma = match fam {
            Family::Fs | Family::FsModified => 1.0,
            Family::BergmanModified => -1.0,
            _ => return Ok(true),
        };
        let (e1, e2) = if fam == Family::Fs {
            (1.0, 1.0)
        } else {
            (r.eps1, r.eps2)
        };
        let n = 1.0 + sigma * (e1 * (p[0] * p[0] + p[1] * p[1]) + e2 * (p[2] * p[2] + p[3] * p[3]));
        Ok(away(n))
    } else {
        Ok(true)
    }
}
