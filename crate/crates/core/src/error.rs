use thiserror::Error;

/// Errors raised by the library.
///
/// The three broad classes map onto distinct CLI exit codes: contract
/// violations (bad input), resource-cap breaches, and internal consistency
/// failures that indicate a bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid input: {0}")]
    Contract(String),

    #[error("{limit} exceeded: {detail}")]
    Resource { limit: &'static str, detail: String },

    #[error("incomplete factorization: cofactor {cofactor} could not be split")]
    IncompleteFactorization { cofactor: String },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn resource(limit: &'static str, detail: impl Into<String>) -> Self {
        Error::Resource {
            limit,
            detail: detail.into(),
        }
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// True for cap breaches (configuration limits), as opposed to bad input.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::Resource { .. } | Error::IncompleteFactorization { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
