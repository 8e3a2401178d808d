use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the stated domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Adaptive quadrature ran out of its subdivision budget. Carries the
    /// best available estimate and a bound on its error.
    #[error("quadrature did not converge: best estimate {estimate}, error bound {error_bound}")]
    Quadrature { estimate: f64, error_bound: f64 },

    #[error("root bracketing failed: {0}")]
    Bracket(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
