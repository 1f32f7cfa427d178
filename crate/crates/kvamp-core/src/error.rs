//! Error type shared by every module in the crate.

use alloc::string::String;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A model parameter is outside its admissible domain.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    /// Level sizes, SST sizes, or dataset sizes do not form a valid geometry.
    #[error("invalid geometry: {0}")]
    Geometry(String),

    /// A constraint solve has no solution in the admissible region.
    #[error("infeasible constraint: {0}")]
    Infeasible(String),

    /// Exact integer traffic accounting exceeded 128-bit range.
    #[error("arithmetic overflow in exact traffic accounting")]
    Overflow,

    /// An input collection was empty where at least one element is required.
    #[error("empty input: {0}")]
    Empty(&'static str),

    /// A lookup or interpolation query fell outside the covered range.
    #[error("out of range: {0}")]
    OutOfRange(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParam {
            name,
            reason: reason.into(),
        }
    }
}
