use thiserror::Error;

/// Errors raised across the model, estimators and pipelines.
#[derive(Debug, Error)]
pub enum GmoError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("empty sample")]
    EmptySample,

    /// Quadrature or root finding did not reach the requested tolerance.
    #[error("numerical failure: {message} (achieved error estimate {achieved:e})")]
    Numerical { message: String, achieved: f64 },

    #[error("data error: {0}")]
    Data(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl GmoError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        GmoError::InvalidParameter(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        GmoError::Domain(msg.into())
    }

    pub(crate) fn data(msg: impl Into<String>) -> Self {
        GmoError::Data(msg.into())
    }

    /// Process exit code used by the `gmo` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            GmoError::Config(_) | GmoError::InvalidParameter(_) | GmoError::Unsupported(_) => 2,
            GmoError::Data(_) | GmoError::EmptySample | GmoError::Csv(_) | GmoError::Domain(_) => 3,
            GmoError::Numerical { .. } => 4,
            GmoError::Io(_) | GmoError::Json(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, GmoError>;
