use thiserror::Error;

/// Errors raised by the counting, decomposition and bound routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An input exceeds a configured size cap. `what` names the limiting dimension.
    #[error("size limit exceeded: {what} is {actual}, cap is {limit}")]
    SizeLimit {
        what: String,
        actual: u128,
        limit: u128,
    },

    /// A precondition of an operation does not hold.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A poset document or constructor input breaks a LeveledPoset invariant.
    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    /// An internal self-check failed. Never expected to fire.
    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("malformed poset JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn size(what: impl Into<String>, actual: impl Into<u128>, limit: impl Into<u128>) -> Self {
        Error::SizeLimit {
            what: what.into(),
            actual: actual.into(),
            limit: limit.into(),
        }
    }
}
