use std::path::PathBuf;

use mqc_core::MqcError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config at `{path}`: {msg}")]
    Config { path: String, msg: String },

    #[error("usage: {0}")]
    Usage(String),

    #[error(
        "refusing to run: state storage needs about {required} bytes but the budget is {budget} bytes \
         (raise it with {var})"
    )]
    Budget { required: u64, budget: u64, var: &'static str },

    #[error(transparent)]
    Core(#[from] MqcError),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn config(path: impl Into<String>, msg: impl Into<String>) -> Self {
        CliError::Config { path: path.into(), msg: msg.into() }
    }

    /// 2 for bad input, 3 for a resource refusal, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Usage(_) => 2,
            CliError::Budget { .. } => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
