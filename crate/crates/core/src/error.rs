use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Operands that do not live in the same group, malformed coordinates, etc.
    #[error("structural error: {0}")]
    Structural(String),

    /// A precondition on the mathematical input failed.
    #[error("domain error: {0}")]
    Domain(String),

    /// An enumeration or search would exceed a configured cap.
    #[error("resource error: {what} needs {needed}, cap is {cap}")]
    Resource { what: String, needed: u64, cap: u64 },

    /// A guarantee that should hold by construction was violated.
    #[error("internal invariant violated in {stage}: {detail}")]
    Invariant { stage: String, detail: String },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invariant(stage: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Invariant { stage: stage.into(), detail: detail.into() }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
