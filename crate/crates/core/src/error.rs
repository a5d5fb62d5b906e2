use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("jet shape mismatch: ({0}, {1}) vs ({2}, {3})")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("multi-index degree {degree} exceeds jet order {order}")]
    DegreeTooHigh { degree: usize, order: usize },
    #[error("singular point: {0}")]
    Singular(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("jet order {have} too low, need at least {need}")]
    OrderTooLow { have: usize, need: usize },
    #[error("unsupported tensor valence ({0}, {1})")]
    UnsupportedValence(usize, usize),
    #[error("invalid case specification: {0}")]
    InvalidSpec(String),
    #[error("rank-deficient fit: {0}")]
    RankDeficient(String),
    #[error("sampling exhausted: {0}")]
    SamplingExhausted(String),
    #[error("lift obstructed: integrability residual {0:.3e}")]
    LiftObstructed(f64),
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
