use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("unknown key `{0}`")]
    UnknownKey(String),

    #[error("key `{key}` expects {expected}, got `{value}`")]
    TypeMismatch {
        key: String,
        value: String,
        expected: &'static str,
    },

    #[error("file not found: {}", .0.display())]
    MissingFile(PathBuf),

    #[error("inconsistent configuration: {0}")]
    Inconsistent(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("field file line {line}: {message}")]
    FieldFormat { line: usize, message: String },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Solver(#[from] vortinv::Error),
}

impl CliError {
    /// Stable machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Syntax { .. } => "syntax",
            CliError::UnknownKey(_) => "unknown-key",
            CliError::TypeMismatch { .. } => "type-mismatch",
            CliError::MissingFile(_) => "missing-file",
            CliError::Inconsistent(_) => "inconsistent",
            CliError::Precondition(_) => "precondition",
            CliError::FieldFormat { .. } => "field-format",
            CliError::Io { .. } => "io",
            CliError::Solver(_) => "solver",
        }
    }

    /// Process exit status: 2 for bad input, 1 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver(_) | CliError::Io { .. } => 1,
            _ => 2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": { "kind": self.kind(), "message": self.to_string() } }).to_string()
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }
}
