use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("{}", config_location(.line, .message))]
    Config {
        line: Option<usize>,
        message: String,
    },

    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("numerical failure: {0}")]
    Numerical(mhd1d_core::Error),

    #[error("verification failed: {0}")]
    Verify(String),
}

fn config_location(line: &Option<usize>, message: &str) -> String {
    match line {
        Some(l) => format!("config line {l}: {message}"),
        None => format!("config: {message}"),
    }
}

impl CliError {
    pub fn config(line: Option<usize>, message: impl Into<String>) -> Self {
        CliError::Config {
            line,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_)
            | CliError::Config { .. }
            | CliError::Read { .. }
            | CliError::Write { .. } => 1,
            CliError::Numerical(_) => 2,
            CliError::Verify(_) => 3,
        }
    }
}

impl From<mhd1d_core::Error> for CliError {
    /// Input-validation failures are configuration errors; everything else
    /// is a failure of the integration itself.
    fn from(e: mhd1d_core::Error) -> Self {
        use mhd1d_core::Error as E;
        match e {
            E::InvalidParameter(m) | E::Domain(m) => CliError::config(None, m),
            E::Ladder { nu, source } if !source.is_numerical() => {
                CliError::config(None, format!("nu = {nu:e}: {source}"))
            }
            other => CliError::Numerical(other),
        }
    }
}
