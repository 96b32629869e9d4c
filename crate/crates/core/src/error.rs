use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{what}: value {value} is outside the domain ({constraint})")]
    Domain {
        what: &'static str,
        value: f64,
        constraint: &'static str,
    },
    /// An iterative method hit its iteration cap.
    #[error("{what} did not converge within {iterations} iterations")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
    },
    /// A study record violates an invariant. Unlike a missing value, this is never skipped.
    #[error("study `{id}`: {reason}")]
    InvalidRecord { id: String, reason: String },
    /// Run configuration cannot be satisfied by the data.
    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, constraint: &'static str) -> Self {
        Error::Domain {
            what,
            value,
            constraint,
        }
    }
}
