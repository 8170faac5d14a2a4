use thiserror::Error;

use crate::space::Subset;

/// A subset whose reconstructed value did not settle before the sweep cap.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct StabilizationFailure {
    pub subset: Subset,
    pub previous: f64,
    pub last: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("domain mismatch: expected a space of size {expected}, found {found}")]
    DomainMismatch { expected: usize, found: usize },

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("capacity table has {found} entries, expected {expected}")]
    TableLength { expected: usize, found: usize },

    #[error("capacity value {value} on {subset} is outside [0, 1]")]
    OutOfRange { subset: Subset, value: f64 },

    #[error("capacity value on {subset} is {found}, must be {expected}")]
    Boundary { subset: Subset, expected: f64, found: f64 },

    #[error("capacity is not monotone: c({smaller}) = {smaller_value} > c({larger}) = {larger_value}")]
    NotMonotone {
        smaller: Subset,
        larger: Subset,
        smaller_value: f64,
        larger_value: f64,
    },

    #[error("invalid possibility density: {0}")]
    InvalidDensity(String),

    #[error("invalid space map: {0}")]
    InvalidMap(String),

    #[error("function value {value} at point {point} is outside [0, 1]")]
    RangeViolation { point: usize, value: f64 },

    #[error("precondition violated{}: {reason}", point.map(|p| format!(" at point {p}")).unwrap_or_default())]
    Precondition { point: Option<usize>, reason: String },

    #[error("reconstruction did not stabilize on {} subset(s)", failures.len())]
    NotStabilized { failures: Vec<StabilizationFailure> },

    #[error("functional is not monotone: reconstructed c({smaller}) = {smaller_value} > c({larger}) = {larger_value}")]
    InvalidFunctional {
        smaller: Subset,
        larger: Subset,
        smaller_value: f64,
        larger_value: f64,
    },

    #[error("functional returned a non-finite value {value} on {subset}")]
    NonFiniteFunctional { subset: Subset, value: f64 },

    #[error("invalid finitely supported outer capacity: {0}")]
    InvalidOuter(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
