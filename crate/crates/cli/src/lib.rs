//! Experiment runner: trains VFDT and the strict variants over a grid of
//! streams, tie thresholds and seeds, and writes per-run records, aggregate
//! tables, relative metrics and learning curves.
//!
//! Output files:
//!
//! - `runs.jsonl`: one [`RunRecord`] per line, fields in declaration order.
//! - `aggregate.csv`: [`runner::AGGREGATE_HEADER`], one row per
//!   (stream, algorithm, τ).
//! - `relative.csv`: [`relative::RELATIVE_HEADER`], one row per
//!   (candidate, τ).
//! - `curves/*.csv`: [`curves::CURVE_HEADER`], one file per run.

pub mod config;
pub mod curves;
pub mod error;
pub mod relative;
pub mod runner;

pub use config::{ExperimentConfig, StreamSpec};
pub use curves::export_curves;
pub use error::{CliError, CliResult};
pub use relative::{relative_metrics, relative_to, RelativeRow};
pub use runner::{read_runs, run_experiment, run_grid, AggregateRow, ExperimentOutput, RunRecord};

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "SVFDT_WORKERS";
