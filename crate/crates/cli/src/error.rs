use std::path::PathBuf;

/// Failure of a cli operation, classified by the exit code it maps to.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, error: impl std::fmt::Display) -> Self {
        CliError::Io {
            path: path.into(),
            message: error.to_string(),
        }
    }

    /// 1 for configuration errors, 2 for I/O and input-data errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 1,
            CliError::Io { .. } => 2,
        }
    }
}

impl From<svfdt_core::Error> for CliError {
    fn from(error: svfdt_core::Error) -> Self {
        use svfdt_core::Error;
        match error {
            Error::Config { field, message } => CliError::Config { field, message },
            Error::Contract(message) => CliError::Config {
                field: "experiment".into(),
                message,
            },
            Error::Io { path, source } => CliError::io(path, source),
            Error::Parse {
                path,
                row,
                column,
                message,
            } => {
                let at = column.map(|c| format!(", column {c}")).unwrap_or_default();
                CliError::Io {
                    path,
                    message: format!("row {row}{at}: {message}"),
                }
            }
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
