//! Pointwise verification of Kähler metrics and their c-projective
//! symmetries using truncated Taylor jets.

pub mod algebras;
pub mod cproj;
pub mod error;
pub mod families;
pub mod geometry;
pub mod jet;
pub mod linalg;

pub use error::{Error, Result};
pub use families::{CaseSpec, Family, GChoice, Params, Point};
pub use geometry::{KahlerResiduals, MetricFrame, Tensor};
pub use jet::{ComplexJet, Jet};
