use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its allowed range (e.g. `q < 2`, `t > n`).
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Input data violates an invariant (duplicate values, symbol >= q, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// The operation would exceed a configured capacity bound.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// The requested quantity does not exist (e.g. no threshold crossing).
    #[error("not found: {0}")]
    NotFound(String),

    /// A persisted file could not be parsed. Lines are 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
