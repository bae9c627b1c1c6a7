use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid order n = {0}: orders start at 1")]
    InvalidOrder(usize),

    #[error("order n = {n} exceeds the dense ceiling {max} (raise it with allow_large)")]
    SizeLimit { n: usize, max: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} did not converge in {iterations} iterations (last values: {history:?})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        history: Vec<f64>,
    },

    #[error("structure violation: {0}")]
    StructureViolation(String),

    #[error("paths {path} and {other} collide near eps = {eps}")]
    PathCollision { path: usize, other: usize, eps: f64 },

    #[error("integer overflow in exact arithmetic")]
    Overflow,

    #[error("malformed input at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
