use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid ground set: {0}")]
    Ground(String),
    #[error("need at least two elements")]
    TooFewElements,
    #[error("subset {0} is not within the ground set")]
    OutOfGround(String),
    #[error("ground sets differ")]
    GroundMismatch,
    #[error("label `{0}` already in use")]
    LabelClash(String),
    #[error("empty subset not allowed here")]
    EmptySubset,
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("not a polymatroid: {0}")]
    NotPolymatroid(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("cone is not pointed: lineality space of dimension {0}")]
    NotPointed(usize),
    #[error("resource cap exceeded: {0}")]
    Cap(String),
    #[error("{0}")]
    Failed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
