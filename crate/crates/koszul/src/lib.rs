//! File formats, report envelope and command dispatch for the `koszul` tool.
//!
//! All computation lives in `koszul_core`; this crate reads JSON documents,
//! runs one subcommand and writes a versioned report to stdout.

pub mod commands;
pub mod error;
pub mod format;
pub mod report;

pub use commands::{execute, Cli, Output};
pub use error::CliError;
