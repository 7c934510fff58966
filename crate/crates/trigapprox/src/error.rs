use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] trigapprox_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("{psi}: ratio {ratio} at n = {n} outside envelope [{lo}, {hi}]")]
    TrendViolation { psi: String, n: usize, ratio: f64, lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, HarnessError>;
