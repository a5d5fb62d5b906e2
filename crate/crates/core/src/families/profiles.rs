//! The univariate functions `ρ`, `ρ'`, `F` of each family and the 2D data
//! (`h`, `τ`, area density) of the degenerate families.

use num_complex::Complex64;

use super::spec::{Family, GChoice, Resolved};
use crate::error::{Error, Result};
use crate::jet::{ComplexJet, Jet};

/// `ρ`, `dρ/dx` and `F` along one coordinate.
#[derive(Clone, Debug)]
pub struct Profile {
    pub rho: Jet,
    pub drho: Jet,
    pub f: Jet,
}

#[derive(Clone, Debug)]
pub(crate) struct ComplexProfile {
    pub rho: ComplexJet,
    pub drho: ComplexJet,
    pub f: ComplexJet,
}

fn wrong(family: Family, what: &str) -> Error {
    Error::InvalidSpec(format!("{family} is not a {what} family"))
}

/// Profile of coordinate `x_i` (`which` = 0 or 1) of a Liouville family.
pub(crate) fn liouville_profile(
    family: Family,
    r: &Resolved,
    which: usize,
    x: &Jet,
) -> Result<Profile> {
    let (c, d) = if which == 0 { (r.c0, r.d0) } else { (r.c1, r.d1) };
    let one = |v: f64| Jet::constant(v, x.nvars(), x.order());
    Ok(match family {
        Family::L1 => Profile {
            rho: x.clone(),
            drho: one(1.0),
            f: one(c),
        },
        Family::L2 => {
            let rho = x.scale(r.beta - 1.0).exp().scale(c);
            Profile {
                drho: rho.scale(r.beta - 1.0),
                rho,
                f: x.scale(-0.5 * (r.beta + 2.0)).exp().scale(d),
            }
        }
        Family::L3 => Profile {
            rho: x.clone(),
            drho: one(1.0),
            f: x.scale(-1.5).exp().scale(c),
        },
        Family::L4 => {
            let t = x.tan()?;
            let cos_root = x.cos().abs_powf(0.5)?;
            Profile {
                drho: -(&(&t * &t) + 1.0),
                rho: -t,
                f: x.scale(-1.5 * r.beta).exp().scale(c).try_div(&cos_root)?,
            }
        }
        _ => return Err(wrong(family, "Liouville")),
    })
}

/// Profile in `z` of a complex family.
pub(crate) fn complex_profile(family: Family, r: &Resolved, z: &ComplexJet) -> Result<ComplexProfile> {
    let vs = Complex64::new(r.vs0, r.vs1);
    let (nvars, order) = (z.re.nvars(), z.re.order());
    let one = |v: Complex64| ComplexJet::constant(v, nvars, order);
    let c = |v: f64| Complex64::new(v, 0.0);
    Ok(match family {
        Family::C1 => ComplexProfile {
            rho: z.clone(),
            drho: one(c(1.0)),
            f: one(vs),
        },
        Family::C2 => {
            let rho = z.scale(c(r.beta - 1.0)).exp();
            ComplexProfile {
                drho: rho.scale(c(r.beta - 1.0)),
                rho,
                f: z.scale(c(-0.5 * (r.beta + 2.0))).exp().scale(vs),
            }
        }
        Family::C3 => ComplexProfile {
            rho: z.clone(),
            drho: one(c(1.0)),
            f: z.scale(c(-1.5)).exp().scale(vs),
        },
        Family::C4 => {
            let t = z.tan()?;
            let cos_root = z.cos().sqrt()?;
            ComplexProfile {
                drho: -&(&t * &t).add_scalar(c(1.0)),
                rho: -&t,
                f: z.scale(c(-1.5 * r.beta)).exp().scale(vs).try_div(&cos_root)?,
            }
        }
        _ => return Err(wrong(family, "complex")),
    })
}

/// Profile in `x0` of a degenerate family.
pub fn degenerate_profile(family: Family, r: &Resolved, x0: &Jet) -> Result<Profile> {
    let one = |v: f64| Jet::constant(v, x0.nvars(), x0.order());
    Ok(match family {
        Family::D1 => {
            let rho = x0.recip()?;
            Profile {
                drho: -(&rho * &rho),
                f: x0.abs_powf(-0.5)?.scale(r.c1),
                rho,
            }
        }
        Family::D2a => {
            let rho = x0.scale(-3.0).exp().scale(r.c1);
            Profile {
                drho: rho.scale(-3.0),
                rho,
                f: one(r.d1),
            }
        }
        Family::D2b => {
            let rho = x0.scale(r.beta - 1.0).exp().scale(r.c1);
            Profile {
                drho: rho.scale(r.beta - 1.0),
                rho,
                f: x0.scale(-0.5 * (r.beta + 2.0)).exp().scale(r.d1),
            }
        }
        Family::D3 => {
            let rho = x0.recip()?;
            Profile {
                drho: -(&rho * &rho),
                f: &x0.scale(-1.5).exp().scale(r.c1) * &x0.abs_powf(-0.5)?,
                rho,
            }
        }
        _ => return Err(wrong(family, "degenerate")),
    })
}

/// Conformal exponent `λ` of `h = e^{λ s0} G (ds0² + ds1²)`; zero for the
/// `G ds0² + ds1²/G` families.
pub(crate) fn conformal_exponent(family: Family, r: &Resolved) -> f64 {
    match family {
        Family::D2b => -(r.beta + 2.0),
        Family::D3 => -3.0,
        _ => 0.0,
    }
}

/// `G(s1)` for a choice; `lambda` only enters the sine family.
pub fn g_function(g: GChoice, lambda: f64, s1: &Jet) -> Result<Jet> {
    Ok(match g {
        GChoice::Generic => {
            let s3 = &(s1 * s1) * s1;
            (&s1.scale(0.3) + &s3.scale(0.2)).add_scalar(1.0)
        }
        GChoice::Quadratic { kappa, mu1, mu2 } => {
            (&(s1 * s1).scale(kappa) + &s1.scale(mu1)).add_scalar(mu2)
        }
        GChoice::Linear { mu1, mu2 } => s1.scale(mu1).add_scalar(mu2),
        GChoice::Power { kappa, mu1, mu2 } => s1
            .scale(mu1)
            .add_scalar(mu2)
            .powf(2.0 * (mu1 + 1.0) / mu1)?
            .scale(kappa),
        GChoice::Exponential { k1, k2 } => s1.scale(k2).exp().scale(k1),
        GChoice::Sine { k1, k2, k3 } => s1
            .scale(k1)
            .add_scalar(k2)
            .sin()
            .powf((lambda - 2.0 * k1) / k1)?
            .scale(k3),
    })
}

/// The 2D part of a degenerate metric: `h` (diagonal), `τ = tau1 ds1` and
/// the area density `√|det h|`.
#[derive(Clone, Debug)]
pub(crate) struct DegenerateH {
    pub h00: Jet,
    pub h11: Jet,
    pub tau1: Jet,
    pub area: Jet,
}

pub(crate) fn degenerate_h_data(
    family: Family,
    r: &Resolved,
    s0: &Jet,
    s1: &Jet,
) -> Result<DegenerateH> {
    let lambda = conformal_exponent(family, r);
    let g = g_function(r.g, lambda, s1)?;
    match family {
        Family::D1 | Family::D2a => Ok(DegenerateH {
            h11: g.recip()?,
            h00: g,
            tau1: s0.clone(),
            area: Jet::constant(1.0, s0.nvars(), s0.order()),
        }),
        Family::D2b | Family::D3 => {
            let conf = &s0.scale(lambda).exp() * &g;
            Ok(DegenerateH {
                h00: conf.clone(),
                h11: conf.clone(),
                tau1: conf.scale(1.0 / lambda),
                area: conf.abs_powf(1.0)?,
            })
        }
        _ => Err(wrong(family, "degenerate")),
    }
}
