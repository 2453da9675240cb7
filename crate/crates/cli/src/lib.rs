//! Command-line front end: argument parsing, commands and run reports.

pub mod args;
pub mod commands;
pub mod error;
pub mod report;
