use thiserror::Error;

use crate::expr::ExprError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("problem file {path}: {detail}")]
    ProblemFile { path: String, detail: String },
    #[error("expression: {0}")]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Core(#[from] volterra_blowup::Error),
    #[error("cannot encode output: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for usage and configuration problems, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Read { .. } | CliError::ProblemFile { .. } | CliError::Expr(_) => 2,
            CliError::Core(volterra_blowup::Error::InvalidConfig(_)) => 2,
            _ => 1,
        }
    }
}
