//! Command-line front end for `vod-core`: run configuration, parameter
//! sweeps, CSV/JSON output, and figure reproduction.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod reproduce;
pub mod sweep;

pub use config::{Model, Param, RunConfig, Tail};
pub use error::CliError;
