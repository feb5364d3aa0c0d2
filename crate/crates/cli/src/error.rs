use std::path::PathBuf;
use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Library(#[from] colperm::Error),

    #[error("bad input: {0}")]
    Input(String),

    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

pub type CliResult<T> = Result<T, CliError>;

pub const OK: u8 = 0;
pub const VERIFICATION_FAILED: u8 = 1;
pub const INFEASIBLE: u8 = 2;
pub const PRECONDITION: u8 = 3;
pub const BAD_INPUT: u8 = 4;

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        use colperm::Error as E;
        let code = match self {
            CliError::Library(E::CapExceeded { .. }) => INFEASIBLE,
            CliError::Library(E::ShortCycles { .. } | E::FormulaNotApplicable(_)) => PRECONDITION,
            CliError::Library(E::Parameter(_) | E::Parse(_) | E::MalformedCycles(_)) => BAD_INPUT,
            CliError::Library(E::Internal(_)) => VERIFICATION_FAILED,
            CliError::Input(_) | CliError::Io { .. } => BAD_INPUT,
        };
        ExitCode::from(code)
    }
}
