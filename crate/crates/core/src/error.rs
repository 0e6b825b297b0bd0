use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (bad index,
    /// malformed partition, mismatched sizes).
    #[error("domain error: {0}")]
    Domain(String),

    /// The input is well formed but violates an operation's precondition
    /// (for example a non-strict game passed to serial dictatorship).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The request exceeds a configured size or budget limit.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}
