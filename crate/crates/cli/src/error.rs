use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] walkbounds::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for configuration problems, 3 for numerical non-convergence,
    /// 4 for resource caps.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(walkbounds::Error::NoConvergence { .. }) => 3,
            CliError::Core(walkbounds::Error::ResourceCap { .. }) => 4,
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
