//! Scene files, builtin families, subcommands and exporters.

pub mod commands;
pub mod error;
pub mod families;
pub mod format;
pub mod manifest;
pub mod render;
pub mod scene;

pub use error::CliError;
