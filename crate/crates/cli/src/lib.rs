//! Library side of the `dmpass` command-line tool: config parsing, the
//! subcommand bodies and report output.

pub mod commands;
pub mod config;
pub mod report;

pub use commands::{run, Command, RunOutput};
pub use config::{load, parse, ConfigError, LoadedConfig, Overrides, ProblemConfig};
pub use report::{Report, SCHEMA_VERSION};
