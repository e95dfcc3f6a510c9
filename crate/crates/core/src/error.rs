use thiserror::Error;

/// Errors raised by the estimation, simulation and tail-bound routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input data contained NaN or infinite values, or a computation overflowed.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// The coefficient model does not describe a probability density on [0,1].
    #[error("invalid density: {0}")]
    InvalidDensity(String),

    /// The coefficient model does not yield a valid (positive definite) covariance.
    #[error("invalid spectral density: {0}")]
    SpectralValidity(String),

    #[error("size {requested} exceeds the supported maximum {max}")]
    Size { requested: usize, max: usize },

    #[error("insufficient data: need at least {needed} usable points, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("normal equations are rank deficient")]
    RankDeficient,

    /// ρ(N) vanished: the function is a trigonometric polynomial.
    #[error("smoothness index vanishes at N = {at}: trigonometric polynomial")]
    TrigPolynomial { at: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
