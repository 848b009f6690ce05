use std::path::PathBuf;

use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("config line {line}: invalid value for `{key}`: {message}")]
    InvalidValue { key: String, line: usize, message: String },
    #[error("{message}")]
    Usage { message: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] radar_dse::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Single-line JSON written to stderr on failure.
#[derive(Serialize)]
pub struct ErrorLine<'a> {
    pub error: &'a str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub key: Option<&'a str>,
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config { .. } => "config",
            CliError::InvalidValue { .. } => "invalid_value",
            CliError::Usage { .. } => "usage",
            CliError::Io { .. } => "io",
            CliError::Core(e) => e.kind(),
            CliError::Json(_) => "json",
        }
    }

    pub fn to_line(&self) -> ErrorLine<'_> {
        let (line, key) = match self {
            CliError::Config { line, .. } => (Some(*line), None),
            CliError::InvalidValue { key, line, .. } => (Some(*line), Some(key.as_str())),
            _ => (None, None),
        };
        ErrorLine {
            error: self.kind(),
            message: self.to_string(),
            line,
            key,
        }
    }
}
