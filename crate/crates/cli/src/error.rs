use std::path::Path;

use thiserror::Error;

/// Failures surfaced by the command line, each mapped to an exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("numeric: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::Parse { .. } => 3,
            CliError::Numeric(_) => 4,
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }

    pub fn parse(source_name: &str, line: usize, message: impl Into<String>) -> Self {
        CliError::Parse {
            source_name: source_name.to_string(),
            line,
            message: message.into(),
        }
    }
}

impl From<nsga_maximin::Error> for CliError {
    fn from(err: nsga_maximin::Error) -> Self {
        use nsga_maximin::Error as E;
        match err {
            E::Capacity(_) | E::State(_) => CliError::Numeric(err.to_string()),
            _ => CliError::Usage(err.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
