use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index out of range: {0}")]
    Range(String),
    #[error("parse error at {position}: {message}")]
    Parse { position: String, message: String },
    #[error("arity error at slice {slice}: {message}")]
    Arity { slice: usize, message: String },
    #[error("graded insertion at slice {slice}: {message}")]
    GradedInsertion { slice: usize, message: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("pattern mismatch: {0}")]
    Pattern(String),
    #[error("resource limit: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;
