//! Library surface of the CLI: command implementations and the CSV
//! dialect, shared between the `fso-mimo` binary and the test harness.

pub mod commands;
pub mod csv;
