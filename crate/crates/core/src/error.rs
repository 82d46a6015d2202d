use thiserror::Error;

/// Errors raised while building or validating inputs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown factor index {0}")]
    UnknownFactor(usize),
    #[error("element does not belong to factor {factor}: {reason}")]
    BadElement { factor: usize, reason: String },
    #[error("elements lie in different factors ({0} and {1})")]
    MixedFactors(usize, usize),
    #[error("invalid factor descriptor: {0}")]
    BadFactor(String),
    #[error("relator {index} is not cyclically reduced")]
    NotCyclicallyReduced { index: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("generation failed: {0}")]
    Generation(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("subcomplex is disconnected: vertices {0} and {1} lie in different components")]
    Disconnected(usize, usize),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
