use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("degenerate distance: ego and agent {0} coincide")]
    DegenerateDistance(String),

    #[error("stream error: {0}")]
    Stream(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("simulation error: {0}")]
    Simulation(String),

    #[error("model file error: {0}")]
    Model(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
