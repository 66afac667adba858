use thiserror::Error;

/// Errors raised while building operators or evaluating special functions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter outside its domain: {0}")]
    Domain(String),

    #[error("denominator pole: {0}")]
    Pole(String),

    #[error("series diverges: {0}")]
    Divergence(String),

    #[error("ill-conditioned evaluation: {0}")]
    IllConditioned(String),

    #[error("no convergence: {0}")]
    Convergence(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
