use thiserror::Error;

/// Errors raised by the inference engine, planner and session layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PinError {
    /// A value fell outside its domain, or a precondition on sizes was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// No candidate digit explains the observed presses.
    #[error("inconsistent user: no candidate digit explains the presses")]
    InconsistentUser,

    /// The session has already completed or been aborted.
    #[error("session is finished")]
    SessionFinished,

    /// A transcript could not be parsed or does not replay.
    #[error("parse error: {0}")]
    Parse(String),
}

impl PinError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        PinError::Domain(msg.into())
    }
}

pub type Result<T, E = PinError> = std::result::Result<T, E>;
