use thiserror::Error;

use crate::arith::ParseError;

/// Errors raised by the engine.
///
/// Variants are grouped so that front ends can map them onto exit codes:
/// input problems, resource caps, non-split algebras and internal assertion
/// failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("cap exceeded: {what} (limit {limit})")]
    CapExceeded { what: String, limit: usize },

    #[error("filtration did not stabilize within {levels} levels")]
    NonStabilizing { levels: usize },

    #[error("algebra does not split over the base field: {0}")]
    NotSplitOverBase(String),

    #[error("element is not a member of the algebra")]
    NotAMember,

    #[error("internal assertion failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub(crate) fn cap(what: impl Into<String>, limit: usize) -> Self {
        Error::CapExceeded {
            what: what.into(),
            limit,
        }
    }
}
