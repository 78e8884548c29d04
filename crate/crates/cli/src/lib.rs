//! Command-line front end: flag parsing, θ sweeps, CSV/JSON output and the
//! `check` self-test mode.

pub mod check;
pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{Cli, Format, Mode, RunConfig};
pub use error::CliError;
pub use run::{run, run_to};

/// Tool version recorded in JSON metadata.
pub const VERSION: &str = concat!("qtomo ", env!("CARGO_PKG_VERSION"));
