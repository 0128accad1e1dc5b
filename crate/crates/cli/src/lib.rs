//! Library surface of the experiment harness: config parsing, CSV output,
//! and the command implementations behind the `lab` binary.

pub mod commands;
pub mod config;
pub mod output;
