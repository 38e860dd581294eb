use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("invalid site index: {0}")]
    InvalidSite(String),
    #[error("cannot construct {what}: {reason}")]
    Construction { what: String, reason: String },
    #[error("invalid ensemble: {0}")]
    InvalidSpec(String),
    #[error("{classes} experiment classes exceed the cap of {cap}; rerun with a larger cap or without symmetry reduction")]
    ClassLimit { classes: usize, cap: usize },
    #[error("target error {epsilon} not reached within {steps} steps (last error {last_error})")]
    Unreached { epsilon: f64, steps: usize, last_error: f64 },
    #[error("oracle limited to {max} sites at q=2, got n={n}")]
    OracleCap { n: usize, max: usize },
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
