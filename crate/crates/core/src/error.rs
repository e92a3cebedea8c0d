use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The requested accuracy was not reached; `best_estimate` is the value at
    /// the point the procedure gave up.
    #[error("accuracy failure: {message} (best estimate {best_estimate:e}, error estimate {error_estimate:e})")]
    Accuracy {
        message: String,
        best_estimate: f64,
        error_estimate: f64,
    },

    #[error("out of range: {0}")]
    Range(String),

    #[error("resource cap exceeded: {0}")]
    Resource(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
