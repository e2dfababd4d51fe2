//! Command-line front end for `ahpfill-core` and its synthetic evaluation
//! harness. The binary in `main.rs` only parses arguments and dispatches
//! here.

pub mod bench;
pub mod commands;
mod error;

pub use error::CliError;
