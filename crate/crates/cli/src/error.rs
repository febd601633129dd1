use std::fmt;
use std::path::PathBuf;

/// Process exit codes. Stable across releases.
pub mod exit {
    pub const OK: u8 = 0;
    pub const RUNTIME: u8 = 1;
    pub const NOT_CONVERGED: u8 = 2;
    pub const VIOLATED: u8 = 3;
    pub const DIVERGED: u8 = 4;
    pub const CONFIG: u8 = 64;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn config(msg: impl fmt::Display) -> Self {
        CliError::Config(msg.to_string())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => exit::CONFIG,
            CliError::Runtime(_) | CliError::Io { .. } => exit::RUNTIME,
        }
    }
}

impl From<fixpt_core::Error> for CliError {
    fn from(e: fixpt_core::Error) -> Self {
        use fixpt_core::Error as E;
        match e {
            E::InvalidConfig(msg) | E::InvalidInput(msg) => CliError::Config(msg),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
