//! Error types shared across the engine.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CoreError>;

#[derive(Debug, Error)]
pub enum CoreError {
    /// Invalid argument to a pure function (bad quantum numbers, negative linewidth, ...).
    #[error("invalid argument: {0}")]
    Argument(String),
    /// Inconsistent model configuration (missing rme, broken Hermiticity constraint, zero g, ...).
    #[error("configuration error: {0}")]
    Config(String),
    /// A documented precondition or postcondition failed at runtime.
    #[error("contract violation: {0}")]
    Contract(String),
    /// The requested field/phase combination has no model (intermediate phase).
    #[error("unmodeled phase: {0}")]
    UnmodeledPhase(String),
}

impl CoreError {
    pub fn argument(msg: impl Into<String>) -> Self {
        CoreError::Argument(msg.into())
    }
    pub fn config(msg: impl Into<String>) -> Self {
        CoreError::Config(msg.into())
    }
    pub fn contract(msg: impl Into<String>) -> Self {
        CoreError::Contract(msg.into())
    }
    pub fn unmodeled(msg: impl Into<String>) -> Self {
        CoreError::UnmodeledPhase(msg.into())
    }
}
