use thiserror::Error;

use crate::func::ValidationReport;

/// Errors raised by the library operations.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("empty set")]
    EmptySet,
    #[error("sqrt of negative argument {0}")]
    DomainError(f64),
    #[error("point {0} is outside the function domain")]
    OutOfDomain(f64),
    #[error("point is not in the set")]
    PointNotInSet,
    #[error("scalar must be positive, got {0}")]
    NonPositiveScalar(f64),
    #[error("relative-interior qualification fails")]
    QualificationFailed,
    #[error("slope {xi} is not in the eps-subdifferential of the sum")]
    NotInSumSubdifferential { xi: f64 },
    #[error("functional is not in the eps-coderivative of the combined mapping")]
    NotInCoderivative,
    #[error("no split found at resolution {resolution}")]
    NoSplitFound { resolution: usize },
    #[error("feasible set and domain do not intersect")]
    InfeasibleIntersection,
    #[error("point {0} is not feasible")]
    InfeasiblePoint(f64),
    #[error("objective is unbounded below on the feasible set")]
    UnboundedBelow,
    #[error("point is not an eps-solution")]
    NotEpsSolution,
    #[error("point is not an exact solution")]
    NotExactSolution,
    #[error("optimal value is infinite at {0}")]
    ValueInfinite(f64),
    #[error("invalid polyhedron: {0}")]
    InvalidPolyhedron(String),
    #[error("invalid function: {0}")]
    Validation(ValidationReport),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
