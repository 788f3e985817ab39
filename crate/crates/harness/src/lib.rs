//! Experiment runner for `ddzo-core`: TOML configs, budgeted runs across
//! estimators and seeds, statistical verification suites, and CSV output.

pub mod bounds;
pub mod config;
pub mod env;
pub mod error;
pub mod plan;
pub mod run;
pub mod verify;

pub use config::ExperimentConfig;
pub use error::{HarnessError, Result};
pub use run::{run_experiment, write_outputs, ResultRow, RowStatus, RunOutput, TraceRow};
pub use verify::{run_suites, write_report, Check, Suite};
