//! Command-line pipeline around `flexplan-core`: TOML configuration, CSV
//! ingestion, verbs writing JSON and CSV artifacts, and run manifests.

pub mod config;
pub mod error;
pub mod ingest;
pub mod output;
pub mod pipeline;

pub use config::RunConfig;
pub use error::{CliError, IngestError};
pub use pipeline::{run, Verb};
