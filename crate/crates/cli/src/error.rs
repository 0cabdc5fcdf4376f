use flexplan_core::scenarios::ScenarioError;
use flexplan_core::studies::StudyError;
use std::path::PathBuf;
use thiserror::Error;

/// Failures of a pipeline run. Every variant maps to one process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Configuration problem; `field` is the dotted config key at fault.
    #[error("{field}: {message}")]
    Config { field: String, message: String },
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error("scenario construction failed: {0}")]
    Scenario(#[from] ScenarioError),
    #[error("study failed: {0}")]
    Study(#[from] StudyError),
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Artifact { path: PathBuf, message: String },
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Ingest(_) | CliError::Artifact { .. } => 3,
            CliError::Scenario(_) | CliError::Study(_) => 4,
            CliError::Read { .. } | CliError::Write { .. } => 5,
        }
    }
}

/// Input files that cannot be used at all. Single bad days are not errors;
/// they are dropped and reported.
#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{field}: no '# unit: ...' header comment")]
    MissingUnit { field: String },
    #[error("{field}: unit '{found}' not accepted, expected one of {expected}")]
    Unit {
        field: String,
        found: String,
        expected: String,
    },
    #[error("{field}: header must be 'timestamp,value', found '{found}'")]
    Header { field: String, found: String },
    #[error("{field}: no data rows")]
    Empty { field: String },
    #[error("{field}: {message}")]
    Csv { field: String, message: String },
    #[error("no day survived ingestion ({dropped} dropped)")]
    NoDays { dropped: usize },
}
