use ldp::LdpError;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] LdpError),

    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),

    #[error("{0} validation check(s) failed")]
    ChecksFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(..) => EXIT_USAGE,
            CliError::Core(e) if e.is_usage() || matches!(e, LdpError::Divergence { .. }) => EXIT_USAGE,
            CliError::Core(_) => EXIT_NUMERIC,
            CliError::ChecksFailed(_) => EXIT_CHECK_FAILED,
        }
    }
}
