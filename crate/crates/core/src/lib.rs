//! Optimal constrained quantizers for the uniform distribution on the unit
//! segment `J = [0, 1] x {0}` of the plane, where the quantizer points must
//! lie on the diagonal segments `S_j = {(x, x + 1/j) : -1/j <= x <= 1}`.
//!
//! Optimal `n`-point sets are obtained three ways: the closed form
//! ([`closed_form`]), a Lloyd-style fixed point on one constraint
//! ([`quantizer`]) and exhaustive grid search ([`oracle`]). [`asymptotics`]
//! estimates the quantization dimension and coefficient from the error
//! sequence.

// Negated float comparisons are used so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod cli;
pub mod closed_form;
pub mod error;
pub mod geometry;
pub mod measure;
pub mod oracle;
pub mod quantizer;

pub use error::{Error, Result};
pub use geometry::{ConstraintIndex, ConstraintPoint, Point};
pub use measure::{SegmentMeasure, SupportInterval, UniformSegmentMeasure};
pub use quantizer::{Partition, Quantizer, SolverConfig, SolverOutcome};
