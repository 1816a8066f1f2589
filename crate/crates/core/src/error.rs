use thiserror::Error;

use crate::extgrid::ExtPoint;

/// Errors raised by the toolkit.
///
/// `Input` and `Format` map to exit code 2 in the command-line front end,
/// everything that reports a mathematical property failing is carried by a
/// report value instead of an error.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("diagram violation: {0}")]
    Violation(String),

    #[error("module is not determined by the given set; witness {c} <= {d}")]
    NotDetermined { c: ExtPoint, d: ExtPoint },

    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
