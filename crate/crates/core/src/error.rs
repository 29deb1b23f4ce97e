use thiserror::Error;

/// Errors raised by the evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The diagonal Laguerre transform only accepts zero-winding, integer-power terms.
    #[error("unsupported symbol: {0}")]
    UnsupportedSymbol(String),

    /// A slice weight `1 - Δ·ℋ(m)` left the positive range at a retained `m`.
    #[error("non-positive slice weight {weight} at m = {m}")]
    NonPositiveWeight { m: u64, weight: f64 },

    #[error("tail sum not certified after {terms} terms: {reason}")]
    TruncationFailure { terms: u64, reason: String },

    #[error("eigensolve failed: {0}")]
    Eigensolve(String),

    #[error("invalid worldline: {0}")]
    InvalidPath(String),

    /// Two independent evaluation routes disagreed.
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
}

impl Error {
    /// Short machine-readable tag, used for structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::UnsupportedSymbol(_) => "unsupported_symbol",
            Error::NonPositiveWeight { .. } => "non_positive_weight",
            Error::TruncationFailure { .. } => "truncation_failure",
            Error::Eigensolve(_) => "eigensolve",
            Error::InvalidPath(_) => "invalid_path",
            Error::CrossCheck(_) => "cross_check",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
