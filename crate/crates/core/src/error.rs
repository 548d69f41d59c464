use thiserror::Error;

/// Errors raised by group oracles, graph builds and diagnostics.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A spec, word string or parameter could not be parsed or failed validation.
    #[error("spec error: {0}")]
    Spec(String),

    /// An element is not a valid normal form for the group it was given to.
    #[error("representation error: {0}")]
    Representation(String),

    /// A build or enumeration would exceed its resource budget.
    #[error("{what} exceeds the budget of {budget}")]
    Budget { what: String, budget: usize },

    /// The enumerated ball is too small to certify the requested quantity.
    #[error("insufficient radius: {0}")]
    InsufficientRadius(String),

    /// Horoball truncation depth is too small to certify the requested quantity.
    #[error("insufficient depth: {0}")]
    InsufficientDepth(String),

    /// Input outside the operation's domain (empty set, non-metric base, disconnected graph).
    #[error("domain error: {0}")]
    Domain(String),

    /// A checked structural property failed on a concrete instance.
    #[error("invariant violation: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn budget(what: impl Into<String>, budget: usize) -> Self {
        Error::Budget {
            what: what.into(),
            budget,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
