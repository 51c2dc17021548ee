use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("arity {0} exceeds the supported maximum of {max}", max = crate::constraint::MAX_ARITY)]
    ArityTooLarge(usize),
    #[error("index {index} out of range for arity {arity}")]
    Index { index: usize, arity: usize },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{n} variables exceed the brute-force cap of {cap}; use a tractable or approximate method")]
    CapExceeded { n: usize, cap: usize },
    #[error("certificate error: {0}")]
    Certificate(String),
    #[error("script replay mismatch: {0}")]
    Replay(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
