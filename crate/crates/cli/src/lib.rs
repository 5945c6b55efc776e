//! Command-line experiments over threshold recurrence systems.
//!
//! An [`ExperimentConfig`] (TOML file plus flag overrides) selects a mode;
//! [`cmd_run`] executes it and writes `report.json`, `cycles.csv` and
//! optional traces to the output directory.

pub mod config;
pub mod report;
pub mod runner;
pub mod trace;

pub use config::{ExperimentConfig, Mode, SystemKind, TraceFormat};
pub use report::RunReport;
pub use runner::cmd_run;
pub use trace::{decode, encode, export_trace, import_trace};
