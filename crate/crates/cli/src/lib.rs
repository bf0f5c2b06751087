//! Command-line front end: configuration parsing, run orchestration and
//! CSV output for `mhd1d-core`.

pub mod commands;
pub mod config;
pub mod csv;
pub mod error;
pub mod output;

pub use commands::{cmd_layer, cmd_solve, cmd_sweep, cmd_verify, Options, Outcome};
pub use config::{parse_config, parse_config_str, ParsedConfig, Study};
pub use error::CliError;
