//! Point symmetries of second-order ODE systems via the second prolongation.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::VectorFieldExpr;
use crate::error::{Error, Result};
use crate::jet::Jet;

type Equations = dyn Fn(&Jet, &[Jet], &[Jet], &[Jet]) -> Vec<Jet> + Send + Sync;
type Solver = dyn Fn(f64, &[f64], &[f64], &[f64]) -> Vec<f64> + Send + Sync;

/// A second-order system in one independent variable `x` and `m` dependent
/// variables `u`, given by equations `Δ(x, u, u_x, u_xx) = 0` and a solver
/// returning all `u_xx` on the solution manifold from `(x, u, u_x)` and the
/// `free` second derivatives the equations leave undetermined.
#[derive(Clone)]
pub struct OdeSystem {
    pub label: String,
    pub dependents: usize,
    pub free: usize,
    equations: Arc<Equations>,
    solve: Arc<Solver>,
}

impl std::fmt::Debug for OdeSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "OdeSystem({})", self.label)
    }
}

impl OdeSystem {
    pub fn new(
        label: impl Into<String>,
        dependents: usize,
        free: usize,
        equations: impl Fn(&Jet, &[Jet], &[Jet], &[Jet]) -> Vec<Jet> + Send + Sync + 'static,
        solve: impl Fn(f64, &[f64], &[f64], &[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        OdeSystem {
            label: label.into(),
            dependents,
            free,
            equations: Arc::new(equations),
            solve: Arc::new(solve),
        }
    }

    /// A single equation `y_xx = f(x, y, y_x)`.
    pub fn scalar(
        label: impl Into<String>,
        rhs: impl Fn(&Jet, &Jet, &Jet) -> Jet + Send + Sync + 'static,
    ) -> Self {
        let rhs = Arc::new(rhs);
        let r2 = rhs.clone();
        OdeSystem::new(
            label,
            1,
            0,
            move |x, u, ux, uxx| vec![&uxx[0] - &rhs(x, &u[0], &ux[0])],
            move |x, u, ux, _| {
                let c = |v: f64| Jet::constant(v, 1, 0);
                vec![r2(&c(x), &c(u[0]), &c(ux[0])).value()]
            },
        )
    }

    /// Residuals of the equations at a jet point.
    pub fn residuals(&self, x: f64, u: &[f64], ux: &[f64], uxx: &[f64]) -> Vec<f64> {
        let c = |v: f64| Jet::constant(v, 1, 0);
        let us: Vec<Jet> = u.iter().map(|&v| c(v)).collect();
        let uxs: Vec<Jet> = ux.iter().map(|&v| c(v)).collect();
        let uxxs: Vec<Jet> = uxx.iter().map(|&v| c(v)).collect();
        (self.equations)(&c(x), &us, &uxs, &uxxs)
            .iter()
            .map(Jet::value)
            .collect()
    }
}

/// `y_xx = −e^{−2x} y_x³`, geodesics of `e^{4x}dx² + e^{2x}dy²`.
pub fn intro_equation_a() -> OdeSystem {
    OdeSystem::scalar("y_xx = −e^(−2x) y_x³", |x, _y, yx| {
        -&(&x.scale(-2.0).exp() * &(&(yx * yx) * yx))
    })
}

/// `y_xx = ½ y_x − ½ e^{−2x} y_x³`.
pub fn intro_equation_b() -> OdeSystem {
    OdeSystem::scalar("y_xx = ½y_x − ½e^(−2x) y_x³", |x, _y, yx| {
        &yx.scale(0.5) - &(&x.scale(-2.0).exp() * &(&(yx * yx) * yx)).scale(0.5)
    })
}

/// `y_xx = 0`.
pub fn intro_equation_flat() -> OdeSystem {
    OdeSystem::scalar("y_xx = 0", |x, _y, _yx| Jet::zero(x.nvars(), x.order()))
}

/// The J-planar curves of Fubini-Study in the affine chart `(x, y, s, t)`,
/// parametrised by `x`: two equations for `(y, s, t)`, with `y_xx` free.
pub fn fubini_study_system() -> OdeSystem {
    OdeSystem::new(
        "Fubini-Study c-projective connection",
        3,
        1,
        |_x, _u, ux, uxx| {
            let (yx, sx, tx) = (&ux[0], &ux[1], &ux[2]);
            let (yxx, sxx, txx) = (&uxx[0], &uxx[1], &uxx[2]);
            let yx2 = yx * yx;
            vec![
                &(&(&(&yx2 * sxx) - &(&(yx * sx) * yxx)) + &(tx * yxx)) + sxx,
                &(&(&(&yx2 * txx) - &(&(tx * yx) * yxx)) - &(sx * yxx)) + txx,
            ]
        },
        |_x, _u, ux, free| {
            let (yx, sx, tx, yxx) = (ux[0], ux[1], ux[2], free[0]);
            let d = 1.0 + yx * yx;
            vec![yxx, yxx * (yx * sx - tx) / d, yxx * (yx * tx + sx) / d]
        },
    )
}

/// Sampling box for `ode_symmetry_check`: `x`, `u`, `u_x` and the free
/// second derivatives are drawn uniformly from `[-1, 1]`.
const BOX: f64 = 1.0;

/// Largest value of `pr²v(Δ)` on the solution manifold over `samples`
/// random jet points, relative to `1 + Σ_i |V_i ∂_i Δ|`.
pub fn ode_symmetry_check(system: &OdeSystem, v: &VectorFieldExpr, samples: usize, seed: u64) -> Result<f64> {
    let m = system.dependents;
    if v.dim() != m + 1 {
        return Err(Error::Other(format!(
            "{}: field has {} components, system needs {}",
            v.label,
            v.dim(),
            m + 1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let mut draw = |n: usize| -> Vec<f64> { (0..n).map(|_| rng.gen_range(-BOX..BOX)).collect() };
        let base = draw(m + 1);
        let ux = draw(m);
        let free = draw(system.free);
        let uxx = (system.solve)(base[0], &base[1..], &ux, &free);
        let coords = prolongation(v, &base, &ux, &uxx)?;

        let mut point = base.clone();
        point.extend(&ux);
        point.extend(&uxx);
        let eval = |dir: &[f64]| -> Vec<f64> {
            let z: Vec<Jet> = point
                .iter()
                .zip(dir)
                .map(|(&p, &d)| Jet::from_taylor_coeffs(1, 1, vec![p, d]).expect("univariate jet"))
                .collect();
            (system.equations)(&z[0], &z[1..=m], &z[m + 1..2 * m + 1], &z[2 * m + 1..])
                .iter()
                .map(|j| j.coeffs()[1])
                .collect()
        };
        let total = eval(&coords);
        let mut scale = vec![1.0; total.len()];
        for i in 0..coords.len() {
            let mut e = vec![0.0; coords.len()];
            e[i] = coords[i];
            for (s, d) in scale.iter_mut().zip(eval(&e)) {
                *s += d.abs();
            }
        }
        for (t, s) in total.iter().zip(&scale) {
            worst = worst.max(t.abs() / s);
        }
    }
    Ok(worst)
}

/// Components of `pr²v` at `(x, u, u_x, u_xx)`, in the order
/// `(ξ, η, η_(1), η_(2))`.
fn prolongation(v: &VectorFieldExpr, base: &[f64], ux: &[f64], uxx: &[f64]) -> Result<Vec<f64>> {
    let m = ux.len();
    let comps = v.at(base, 2)?;
    let d = |f: &Jet, a: &[usize]| f.partial(a).expect("index within order 2");
    let idx1 = |i: usize| {
        let mut a = [0usize; 4];
        a[i] += 1;
        a
    };
    let idx2 = |i: usize, j: usize| {
        let mut a = [0usize; 4];
        a[i] += 1;
        a[j] += 1;
        a
    };
    // D_x f and D_x² f for a function of (x, u)
    let dx = |f: &Jet| {
        d(f, &idx1(0)) + (0..m).map(|b| ux[b] * d(f, &idx1(b + 1))).sum::<f64>()
    };
    let dxx = |f: &Jet| {
        let mut acc = d(f, &idx2(0, 0));
        for b in 0..m {
            acc += 2.0 * ux[b] * d(f, &idx2(0, b + 1)) + uxx[b] * d(f, &idx1(b + 1));
            for c in 0..m {
                acc += ux[b] * ux[c] * d(f, &idx2(b + 1, c + 1));
            }
        }
        acc
    };
    let xi = &comps[0];
    let (dxi, dxxi) = (dx(xi), dxx(xi));
    let mut out = vec![xi.value()];
    out.extend(comps[1..].iter().map(Jet::value));
    for a in 0..m {
        out.push(dx(&comps[a + 1]) - ux[a] * dxi);
    }
    for a in 0..m {
        out.push(dxx(&comps[a + 1]) - 2.0 * uxx[a] * dxi - ux[a] * dxxi);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fubini_study_solver_satisfies_the_equations() {
        let sys = fubini_study_system();
        let ux = [0.3, -0.7, 1.1];
        let uxx = (sys.solve)(0.2, &[0.1, 0.2, 0.3], &ux, &[0.9]);
        for r in sys.residuals(0.2, &[0.1, 0.2, 0.3], &ux, &uxx) {
            assert!(r.abs() < 1e-15);
        }
    }

    #[test]
    fn translation_is_a_symmetry_of_the_flat_equation() {
        let dx = VectorFieldExpr::coordinate("∂x", 2, 0);
        assert!(ode_symmetry_check(&intro_equation_flat(), &dx, 10, 1).unwrap() < 1e-15);
    }
}
