use thiserror::Error;

/// Errors raised while building or solving a problem.
#[derive(Debug, Error)]
pub enum LpError {
    #[error("variable '{name}' has crossed bounds [{lower}, {upper}]")]
    BadBounds { name: String, lower: f64, upper: f64 },
    #[error("non-finite coefficient {value} for '{context}'")]
    NonFinite { context: String, value: f64 },
    #[error("row '{row}' references unknown variable index {index}")]
    UnknownVariable { row: String, index: usize },
    #[error("point has {got} entries, problem has {expected} variables")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("numerical failure: {0}")]
    Numerical(String),
}
