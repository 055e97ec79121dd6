use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("iterative solver did not converge after {iterations} iterations (best relative residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("operator/grid topology mismatch: {0}")]
    Topology(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("argument outside supported domain: {0}")]
    Domain(String),

    #[error("monodromy value is zero: no finite eigenvalue (pure decay mode)")]
    ZeroMultiplier,

    #[error("input pair is not a converged eigenpair: {0}")]
    NotConverged(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
