//! Front end of the `gse` binary: configuration, CSV output and commands.

pub mod commands;
pub mod config;
pub mod output;
