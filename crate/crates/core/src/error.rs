use thiserror::Error;

/// Errors produced by the crystal, Schmidt and finite-interaction pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input outside the domain of the model (coincident particles, N < 2, d <= 0, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative solver ran out of iterations. `last` carries the final iterate.
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    Convergence {
        iterations: usize,
        residual: f64,
        last: Vec<f64>,
    },

    /// The Hessian at the returned stationary point is not positive definite.
    #[error("stationary point is not a minimum: eigenvalue {0:e}")]
    NotMinimum(f64),

    /// A Gaussian kernel that is not a positive-definite operator.
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A path the model does not cover, e.g. finite interaction with d != 1.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Root search for a terminating series failed.
    #[error("root search failed: {0}")]
    SearchFailure(String),

    /// Occupancies that do not add up to a unit trace.
    #[error("inconsistent occupancies: {0}")]
    Inconsistency(String),

    /// Monte Carlo estimate too noisy for the requested accuracy.
    #[error("insufficient precision: {0}")]
    Precision(String),
}

pub type Result<T> = std::result::Result<T, Error>;
