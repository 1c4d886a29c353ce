use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),
    /// Adaptive quadrature exhausted its subdivision budget.
    #[error(
        "quadrature did not converge: best estimate {value} (error estimate {error_estimate}, {subdivisions} subdivisions)"
    )]
    Convergence {
        value: f64,
        error_estimate: f64,
        subdivisions: usize,
    },
    /// A Laplace-type integral does not converge for the requested argument.
    #[error("integral diverges: {0}")]
    Divergence(String),
    /// Mismatched or invalid configuration (grids, selections, options).
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
