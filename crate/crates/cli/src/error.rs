use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("config {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: toml::de::Error,
    },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] casimir_core::Error),

    #[error("at {what}: {source}")]
    Point {
        what: String,
        #[source]
        source: casimir_core::Error,
    },

    /// Truncation study did not reach the requested tolerance.
    #[error("not converged: {0}")]
    NotConverged(String),

    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for numerical non-convergence, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) | CliError::Point { source: e, .. } if e.is_convergence() => 2,
            CliError::NotConverged(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
