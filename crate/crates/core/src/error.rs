use thiserror::Error;

/// Errors raised by the numerical layers (arithmetic, series, solvers).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The series cap was reached before the requested remainder bound.
    #[error("series truncation: remainder bound {achieved:e} after {terms} terms exceeds requested {requested:e}")]
    Truncation {
        achieved: f64,
        requested: f64,
        terms: usize,
    },

    /// A linear system could not be solved reliably.
    #[error("ill-conditioned linear system (condition number {condition:e})")]
    IllConditioned { condition: f64 },

    /// A solve succeeded but its residual is above tolerance.
    #[error("residual {residual:e} above tolerance {eps:e}; increase m_max/j_max")]
    Residual { residual: f64, eps: f64 },

    /// Invalid configuration value.
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
