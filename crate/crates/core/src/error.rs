use thiserror::Error;

/// Errors raised by the certification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("size overflow: {0}")]
    SizeOverflow(String),
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("eigensolver did not converge within {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("Gram matrix is ill-conditioned (condition number {0:e})")]
    IllConditioned(f64),
    #[error("unsupported dimension d = {d}: {reason}")]
    UnsupportedDimension { d: usize, reason: &'static str },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("malformed input: {0}")]
    Format(String),
}

impl Error {
    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. } | Error::IllConditioned(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
