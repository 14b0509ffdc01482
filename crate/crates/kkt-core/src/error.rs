//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input data: bad diagram, bad rational, inconsistent clover,
    /// degenerate linking form where nondegeneracy is required, and so on.
    #[error("validation: {0}")]
    Validation(String),

    /// A computation was requested beyond the configured enumeration cap.
    #[error("degree {degree} exceeds enumeration cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    /// The splitting formula gives no value: the clover degree is smaller
    /// than twice the diagram degree.
    #[error("splitting formula not applicable: clover degree {k} < 2n = {two_n}")]
    NotApplicable { k: usize, two_n: usize },

    /// An internal consistency check failed. Never silent.
    #[error("internal consistency: {0}")]
    Internal(String),

    /// The 2-primary stable comparison could not connect the two sides
    /// within the rewriting bound.
    #[error("undecided at p=2: {0}")]
    Undecided(String),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
