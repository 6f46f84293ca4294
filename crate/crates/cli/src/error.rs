use std::path::PathBuf;

use dpg_core::DpgError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] DpgError),
    #[error("solver failed on level(s) {levels:?}")]
    Solver { levels: Vec<u32> },
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit status: 1 for configuration and I/O problems, 2 when the
    /// numerics failed.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 1,
            CliError::Core(DpgError::UnknownStrategy { .. } | DpgError::InvalidArgument(_)) => 1,
            CliError::Core(_) | CliError::Solver { .. } => 2,
        }
    }
}
