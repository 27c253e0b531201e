use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error)]
pub enum QuenchError {
    /// A physical or numerical parameter is outside its allowed range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A run configuration is malformed or inconsistent.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A numerical assertion failed while evaluating the dynamics.
    #[error("numerical failure at t = {t}: {detail}")]
    Numerical { t: f64, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl QuenchError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        QuenchError::InvalidParameter(msg.into())
    }

    pub(crate) fn numerical(t: f64, detail: impl Into<String>) -> Self {
        QuenchError::Numerical {
            t,
            detail: detail.into(),
        }
    }
}

pub type Result<T, E = QuenchError> = std::result::Result<T, E>;
