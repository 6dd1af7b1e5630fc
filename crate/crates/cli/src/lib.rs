//! Command implementations behind the `specset` binary.

pub mod campaign;
pub mod commands;
pub mod report;

pub use commands::{CliError, CliResult, Status};
pub use report::{Check, RunReport};
