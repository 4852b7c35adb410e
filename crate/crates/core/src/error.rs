use thiserror::Error;

use crate::group::GroupElement;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Operands do not belong to the same structure (coordinate count, group, field).
    #[error("structural mismatch: {0}")]
    Structural(String),

    /// An enumeration-based operation would exceed the configured size cap.
    #[error("resource limit exceeded: size {size} is above the cap {cap}")]
    Resource { size: u128, cap: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("unsupported parameter: {0}")]
    Unsupported(String),

    /// The difference multiset covers two nonzero elements a different number of times.
    #[error(
        "not a difference set: {first:?} is covered {first_count} times but {second:?} is covered {second_count} times"
    )]
    NotDifferenceSet {
        first: GroupElement,
        first_count: u64,
        second: GroupElement,
        second_count: u64,
    },

    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("state is not normalized: squared norm {0}")]
    Unnormalized(f64),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("serialization error: {0}")]
    Serialization(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
