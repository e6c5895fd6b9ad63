use thiserror::Error;

use crate::exactnum::ExactError;

/// Every failure a computation in this crate can report.
///
/// All variants are precondition or domain violations; none of them indicate
/// an internal bug except [`Error::Inconsistent`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("degenerate wall: the two characters are proportional")]
    DegenerateWall,
    #[error("wall is not classifiable: {0}")]
    NotClassifiable(String),
    #[error("wall type mismatch: expected {expected}, found {found}")]
    TypeMismatch { expected: String, found: String },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("tilt slopes are both +∞ and cannot be compared")]
    Incomparable,
    #[error("request refused: {0}")]
    Refused(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
