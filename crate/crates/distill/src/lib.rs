//! Command-line driver for the Gaussian-mixture distillation engine.
//!
//! Three entry points, exposed by the `distill` binary:
//!
//! * `simulate <config>` — run the parameter sweep described by a flat
//!   `key = value` config file and write one CSV row per sweep point;
//! * `monotone <measure> <file>` — evaluate a resource measure on a state
//!   or mixture file and print a one-line report;
//! * `validate oracle` — recompute the pinned comparison matrix between the
//!   Gaussian engine and the truncated number-basis oracle.
//!
//! Everything is deterministic: identical inputs produce byte-identical
//! output tables.

pub mod config;
pub mod csvio;
pub mod monotone;
pub mod oracle_check;
pub mod runner;

/// Process-level error classification: configuration problems exit with
/// code 2, engine/runtime problems with code 3.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("engine error: {0}")]
    Engine(String),
}

impl CliError {
    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Engine(_) => 3,
        }
    }
}
