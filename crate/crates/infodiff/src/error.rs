//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A token could not be parsed (non-integer id, malformed float, ...).
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// Structurally invalid input (mixed 2/3-token lines, relabelled node, ...).
    #[error("format error: {0}")]
    Format(String),
    /// A value fell outside its admissible range (negative id, id >= n, ...).
    #[error("range error: {0}")]
    Range(String),
    /// An argument violated an operation precondition.
    #[error("argument error: {0}")]
    Argument(String),
    /// Inconsistent configuration (beta mismatch, bad weight sums, ...).
    #[error("config error: {0}")]
    Config(String),
    /// A step was applied to a state of the wrong representation.
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    /// Operation requires a different cover mode (e.g. disjoint partition).
    #[error("mode error: {0}")]
    Mode(String),
    /// Object not in the state the operation requires.
    #[error("state error: {0}")]
    State(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
