//! Batch front end for `twinsub-core`: structured output, deterministic
//! parallel drivers, the cross-validation suites and the `twinsub` command.

pub mod cli;
pub mod commands;
mod error;
pub mod output;
pub mod parallel;
pub mod verify;

pub use commands::{run, threshold_rows, ThresholdRow};
pub use error::{ErrorReport, RunError, RunResult};
