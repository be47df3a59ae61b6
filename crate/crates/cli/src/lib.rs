//! Experiment runner for `nsga-maximin`: seeded runs and sweeps, maximin
//! catalogs and post-hoc population analysis.

pub mod cli;
pub mod commands;
pub mod error;
pub mod manifest;
pub mod population;
pub mod report;

pub use error::{CliError, CliResult};
