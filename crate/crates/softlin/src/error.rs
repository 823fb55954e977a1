//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum SoftError {
    /// Two soft objects were combined but are indexed by different parameter sets.
    #[error("parameter set mismatch: {0}")]
    ParameterMismatch(String),
    /// Vector or weight dimensions disagree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// The operation is not defined for this representation (e.g. union of
    /// subspace-kind soft sets, translation of a subspace).
    #[error("unsupported representation: {0}")]
    Unsupported(String),
    /// Malformed input (empty parameter list, negative tolerance, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A documented precondition does not hold (dependent vectors passed to
    /// the independence constant, non-Cauchy window passed to the limit
    /// constructor, ...).
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A tabulated sequence was evaluated past its last term.
    #[error("sequence index {index} out of range (tabulated length {len})")]
    IndexOutOfRange { index: u64, len: usize },
}

pub type Result<T> = std::result::Result<T, SoftError>;
