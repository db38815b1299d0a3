use thiserror::Error;

/// Errors raised across the crate.
///
/// The CLI maps the first three variants to exit code 2 (bad input) and the
/// last two to exit code 1 (a construction or check that should have held).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    InvalidDims(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl Error {
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidDims(_) | Error::Shape(_) | Error::InvalidArgument(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
