//! Command layer behind the `trajgreen` binary.

pub mod commands;
pub mod config;
pub mod document;
pub mod output;

pub use commands::{cmd_compare_engines, cmd_solve1d, cmd_stark, cmd_verify_oracle, dispatch};
pub use config::{Command, Format, Overrides, PotentialSpec, RunConfig, System};
pub use document::{ResultDocument, SCHEMA_VERSION};
pub use output::render;
