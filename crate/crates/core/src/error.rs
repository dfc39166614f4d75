use thiserror::Error;

/// Failure modes of every evaluation path.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaussError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precision error: {0}")]
    Precision(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("series truncation failed: {0}")]
    Truncation(String),

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },
}

impl GaussError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        GaussError::Domain(msg.into())
    }

    pub(crate) fn precision(msg: impl Into<String>) -> Self {
        GaussError::Precision(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            GaussError::Syntax { .. } | GaussError::UnknownIdentifier { .. } => 2,
            GaussError::Domain(_) => 3,
            GaussError::Precision(_) | GaussError::Resource(_) | GaussError::Truncation(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, GaussError>;
