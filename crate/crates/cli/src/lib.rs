//! Batch pipeline over labeled time series: ingest CSV inputs, compute the
//! feature matrix, analyze it, and summarize the results.

pub mod commands;
pub mod config;
pub mod error;
pub mod ingest;
pub mod io;
pub mod manifest;

pub use config::ProjectConfig;
pub use error::{CliError, Result};
