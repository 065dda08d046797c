//! Command-line front end for `zsi-core`: one-off queries (`index`,
//! `classify`, `witness`, `enumerate`) and `verify`, a parallel sweep of the
//! verification suites over a prime range with a per-report file cache.

pub mod cache;
pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod runner;

pub use config::{OutputFormat, PrimeRange, RunConfig, Suite};
pub use error::CliError;
pub use report::{Payload, Record, Status, SuiteReport};
pub use runner::{run, run_suite, RunSummary};
