use std::path::PathBuf;

use crate::config::ConfigError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_PHYSICS: i32 = 3;
pub const EXIT_ORACLE: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("physics error: {0}")]
    Physics(#[from] qsubrad_core::Error),
    #[error("assumption check failed (--strict): {0}")]
    Assumption(String),
    #[error("oracle check failed: {0}")]
    Oracle(String),
    #[error("cannot access {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Physics(_) | CliError::Assumption(_) => EXIT_PHYSICS,
            CliError::Oracle(_) => EXIT_ORACLE,
            CliError::Io { .. } | CliError::Pool(_) => EXIT_IO,
        }
    }
}
