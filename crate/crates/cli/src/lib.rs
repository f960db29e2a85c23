//! File formats, table rendering and subcommand logic for the `effdof`
//! binary. Each `cmd_*` function returns the text the binary prints, so the
//! same paths are exercised from tests without spawning a process.

pub mod commands;
pub mod error;
pub mod input;
pub mod manifest;
pub mod render;

pub use commands::{cmd_estimate, cmd_jackknife, cmd_mi, cmd_simulate, cmd_welch};
pub use error::CliError;
pub use render::{Format, Rendering};
