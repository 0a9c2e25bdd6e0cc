//! Experiment runner behind the `ibuild` binary.

pub mod config;
pub mod report;
pub mod run;
