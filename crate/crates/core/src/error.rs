use thiserror::Error;

use crate::syntax::Position;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("position {0} is not valid in {1}")]
    InvalidPosition(Position, String),
}

/// A parse failure with a 1-based source location.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Error)]
pub enum TheoryError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("line {line}: {name}: {msg}")]
    Invalid { line: usize, name: String, msg: String },
}
