use thiserror::Error;

/// Errors surfaced by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid configuration (sizes, signs, parity, missing data).
    #[error("config error: {0}")]
    Config(String),

    /// Geometric precondition violated (overlap, enclosure, interface).
    #[error("geometry error: {0}")]
    Geometry(String),

    /// Requested value not representable in f64.
    #[error("overflow computing {0}")]
    Overflow(String),

    /// LU factorization hit a pivot below tolerance.
    #[error("singular matrix at pivot {index} (|pivot| = {magnitude:.3e})")]
    Singular { index: usize, magnitude: f64 },

    /// Iterative solve did not reach the requested tolerance.
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        history: Vec<f64>,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed on-disk data (bad magic, truncation, version).
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
