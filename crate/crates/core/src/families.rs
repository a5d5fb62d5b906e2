//! Constructors for the metric families: Liouville, complex and degenerate
//! type Kähler surfaces, their companion metrics and pencils, the constant
//! holomorphic sectional curvature models, and three 2D metrics.

mod forms;
mod metrics;
mod profiles;
mod sampler;
mod spec;

pub use metrics::{
    build_companion, build_frame, build_frame_with, companion_l_tensor, degenerate_h,
    intro_2d_metric, pencil_metric, ComplexSign, FrameBuild,
};
pub use profiles::{degenerate_profile, g_function, Profile};
pub use sampler::{is_regular, sample_points, Sampler};
pub use spec::{CaseSpec, Family, GChoice, Intro2d, Params, Resolved};

/// Chart coordinates of a sampled point.
pub type Point = [f64; 4];
