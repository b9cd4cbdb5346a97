use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configured search cap was exceeded. `lower_bound` carries the best
    /// certified partial answer when one is available.
    #[error("resource limit exceeded: {what} (limit {limit})")]
    Resource {
        what: String,
        limit: u64,
        lower_bound: Option<u64>,
    },

    /// Checked 64-bit arithmetic overflowed.
    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn resource(what: impl Into<String>, limit: u64) -> Self {
        Error::Resource {
            what: what.into(),
            limit,
            lower_bound: None,
        }
    }
}
