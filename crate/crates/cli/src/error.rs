use std::path::PathBuf;

use freeholder_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// 2 for bad input (config, polynomial text, parameters), 3 for
    /// numerical or IO failures. Exit code 1 is reserved for failed
    /// inequalities.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) => match e {
                CoreError::Parse { .. }
                | CoreError::InvalidParameter(_)
                | CoreError::DimensionMismatch(_)
                | CoreError::IndexOutOfRange { .. }
                | CoreError::ZeroPolynomial
                | CoreError::NotSelfadjoint
                | CoreError::DegenerateGrid(_) => 2,
                _ => 3,
            },
            CliError::Io { .. } => 3,
        }
    }
}
