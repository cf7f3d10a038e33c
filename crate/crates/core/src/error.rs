use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Arguments are individually valid but do not fit together
    /// (mismatched lengths or dimensions).
    #[error("contract violation: {0}")]
    Contract(String),
    /// A point, weight or parameter outside the domain of the model.
    #[error("domain error: {0}")]
    Domain(String),
    /// An operation was asked to run on input that fails its precondition.
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
