use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },

    /// The value vanishes up to the stored cutoff, so its sign (or valuation)
    /// is not determined by the known terms.
    #[error("unresolved at truncation: value is zero up to t^{cutoff}")]
    UnresolvedAtTruncation { cutoff: String },

    #[error("not representable exactly: {0}")]
    NotRepresentable(String),

    #[error("element is not finite (infinitely large)")]
    NotFinite,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("expansion needs more than {budget} terms")]
    BudgetExceeded { budget: usize },

    #[error("exponent group violation: {0}")]
    ExponentGroupViolation(String),

    #[error("unsupported sequence spec: {0}")]
    UnsupportedSpec(String),
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }

    pub fn is_unresolved(&self) -> bool {
        matches!(self, Error::UnresolvedAtTruncation { .. })
    }
}
