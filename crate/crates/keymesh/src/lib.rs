//! Experiment harness for `keymesh-core`: parallel trial execution, sweep
//! configuration, CSV output, figure presets and the command-line front end.

pub mod cli;
pub mod config;
pub mod csv;
pub mod design;
pub mod edgelist;
mod error;
pub mod figures;
pub mod runner;
pub mod selftest;
pub mod sweep;

pub use error::{HarnessError, Result};
pub use runner::RayonRunner;
