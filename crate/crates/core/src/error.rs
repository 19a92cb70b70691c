use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration constraint is violated.
    #[error("config error: {0}")]
    Config(String),

    /// Curves or grids of incompatible length were combined.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// An operation that needs at least one element received none.
    #[error("empty sequence: {0}")]
    Empty(String),

    /// The circulant embedding has a genuinely negative eigenvalue.
    #[error("circulant embedding is not nonnegative definite (min eigenvalue {min_eigenvalue:e}, m = {points})")]
    Embedding { min_eigenvalue: f64, points: usize },

    /// A dense Cholesky factorisation failed.
    #[error("covariance matrix is not positive definite (m = {0})")]
    NotPositiveDefinite(usize),

    /// A characteristic-function fit had no usable frequencies.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    /// A named strategy is not registered.
    #[error("unknown {kind} '{name}' (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
