use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A monomial, variable or ideal does not live in the expected ring.
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),

    /// The input is outside the domain of the operation (unit ideal, empty graph, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A structural hypothesis of a criterion does not hold for the given graph.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// A configured resource budget was exceeded.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// An exponent does not fit the supported range.
    #[error("exponent overflow: {0}")]
    Overflow(String),

    /// Malformed input (file formats, command-line values).
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
