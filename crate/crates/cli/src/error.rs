use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    /// A solver or oracle failure; `locus` says where, when known.
    #[error("solver error: {message}")]
    Solver {
        message: String,
        locus: Option<Value>,
    },
}

impl CliError {
    pub fn solver(e: impl std::fmt::Display) -> Self {
        Self::Solver {
            message: e.to_string(),
            locus: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Io(_) | Self::Solver { .. } => 3,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            Self::Config(_) => "config_error",
            Self::Io(_) | Self::Solver { .. } => "solver_error",
        }
    }
}
