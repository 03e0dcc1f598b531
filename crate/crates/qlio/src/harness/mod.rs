//! Experiment harness: protocol matrix execution, persistence,
//! nonparametric statistics and report rendering.

pub mod config;
pub mod experiment;
pub mod record;
pub mod stats;
pub mod table;

pub use config::ExperimentConfig;
pub use experiment::{planned_jobs, run_experiment, ExperimentOutcome, JobSpec};
pub use record::{read_records, write_records, RecordWriter, RunRecord};
pub use stats::{aggregate, aggregate_with_alpha, wilcoxon_signed_rank, CellStats, Winner};
pub use table::render_table;
