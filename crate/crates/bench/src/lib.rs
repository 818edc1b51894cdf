//! Experiment harness for the `rifbf` solvers: single solves, parameter
//! sweeps, trajectory simulation and CSV/JSON reporting.

pub mod cli;
pub mod error;
pub mod report;
pub mod sweep;

pub use error::{BenchError, Result};
