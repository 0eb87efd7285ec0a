use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed document at line {line}, column {column} (field `{path}`): {message}")]
    Json { path: String, line: usize, column: usize, message: String },

    #[error("{field}: {source}")]
    Validation {
        field: String,
        #[source]
        source: invshift_core::Error,
    },

    #[error("{field}: {message}")]
    Invalid { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Invalid { field: field.into(), message: message.into() }
    }

    /// Fills in the field path of a validation error raised without one.
    pub fn at(self, field: &str) -> Self {
        match self {
            CliError::Validation { field: f, source } if f.is_empty() => {
                CliError::Validation { field: field.to_string(), source }
            }
            CliError::Invalid { field: f, message } if f.is_empty() => {
                CliError::Invalid { field: field.to_string(), message }
            }
            other => other,
        }
    }

    /// 1 for bad input, 2 if the library reported an internal theorem violation.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation { source, .. } if source.is_theorem_violation() => 2,
            _ => 1,
        }
    }
}
