use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const VALIDATION: i32 = 1;
    pub const VERIFICATION_FAILED: i32 = 2;
    pub const NON_CONVERGENCE: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    /// A configuration value is unusable; `field` is its dotted path in the config.
    #[error("invalid config field `{field}`: {message}")]
    Field { field: String, message: String },

    #[error("cannot parse config {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A library error raised while working on `context`.
    #[error("{context}: {source}")]
    Compute {
        context: String,
        #[source]
        source: landau_gk::Error,
    },
}

impl CliError {
    pub fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Field {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn compute(context: impl Into<String>, source: landau_gk::Error) -> Self {
        CliError::Compute {
            context: context.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Compute {
                source: landau_gk::Error::NonConvergence { .. } | landau_gk::Error::Divergent(_),
                ..
            } => exit::NON_CONVERGENCE,
            _ => exit::VALIDATION,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
