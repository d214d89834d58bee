use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the model (non-positive price, α ∉ (0,1), ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// The caller asked for something the operation does not support.
    #[error("usage error: {0}")]
    Usage(String),
    /// A gradient step left the positive quadrant or blew up.
    #[error("trajectory escaped at ({p1}, {p2})")]
    Escaped { p1: f64, p2: f64 },
    /// A numerical or algebraic routine failed to produce an answer.
    #[error("computation failed: {0}")]
    Computation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}
