use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("constraint index must be at least 1, got {0}")]
    InvalidIndex(u32),

    #[error("abscissa {x} is not on S_{j} (allowed range [{lo}, 1])")]
    OffConstraint { j: u32, x: f64, lo: f64 },

    #[error("foot {foot} has no preimage on S_{j}")]
    FootOutOfDomain { j: u32, foot: f64 },

    #[error("degenerate canonical equation: both points have plane abscissa {0}")]
    DegenerateBoundary(f64),

    #[error("interval [{lo}, {hi}] is not a subinterval of [0, 1]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("interval [{lo}, {hi}] carries zero mass")]
    ZeroMass { lo: f64, hi: f64 },

    #[error("invalid quantizer: {0}")]
    InvalidQuantizer(String),

    #[error("Voronoi cell {index} does not meet the support")]
    EmptyCell { index: usize },

    #[error("point {index} lies on S_{found}, expected S_{expected}")]
    ConstraintMismatch {
        index: usize,
        found: u32,
        expected: u32,
    },

    #[error("n must be in [1, {max}], got {n}")]
    InvalidCount { n: u64, max: u64 },

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("exhaustive search supports n <= {max}, got {n}")]
    Capability { n: u32, max: u32 },

    #[error("{0} is outside the domain of the estimator")]
    Domain(String),
}
