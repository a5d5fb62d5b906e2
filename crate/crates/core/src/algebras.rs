//! Vector-field generators of the symmetry algebras and the machinery to
//! check them: brackets, closure, dimension, homotheties, lifts and ODE
//! point symmetries.

mod bracket;
mod catalog;
mod field;
mod homothety;
mod ode;

pub use bracket::{
    bracket_field, closure_check, closure_of, dimension_check, dimension_of, jacobi_residual,
    killing_form, lie_bracket, Closure,
};
pub use catalog::{catalog, preset, rows, GeneratorSet, Scenario};
pub use field::VectorFieldExpr;
pub use homothety::{
    degenerate_h_at, flat_conformal_homotheties, homothety_residual, lift_homothety,
    lift_integrability, lift_row, linear_homotheties, power_homothety, quadratic_homotheties,
    sine_killing, HomothetyFit, LiftRow,
};
pub use ode::{
    fubini_study_system, intro_equation_a, intro_equation_b, intro_equation_flat,
    ode_symmetry_check, OdeSystem,
};
