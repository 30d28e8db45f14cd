//! Monte-Carlo benchmarking of the greedy pursuits: seeded α/SMNR sweeps
//! reporting SRNR, ASCE and operation counts, running-time tables, and
//! csv/json/plot-data emitters. The `atomsel` binary wraps these.

pub mod config;
pub mod report;
pub mod sweep;
pub mod timing;

use std::path::{Path, PathBuf};

use atomsel_core::PursuitError;

pub use config::{AlgorithmSpec, ExperimentConfig, Smnr, SmnrCalibration};
pub use report::{
    emit_plot_data, emit_report, format_g17, write_csv, write_plot_data, Cell, ExperimentReport, Measure,
    ReportFormat,
};
pub use sweep::run_sweep;
pub use timing::{emit_timing, measure_running_time, TimingRow, TimingTable};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{}: {cause}", path.display())]
    Io { path: PathBuf, cause: std::io::Error },
    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
    #[error("thread pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Pursuit(#[from] PursuitError),
}

impl BenchError {
    pub(crate) fn io(path: &Path, cause: std::io::Error) -> Self {
        Self::Io { path: path.to_path_buf(), cause }
    }

    pub(crate) fn parse(path: &Path, err: impl std::fmt::Display) -> Self {
        Self::Parse { path: path.to_path_buf(), message: err.to_string().replace('\n', " ").trim().to_string() }
    }
}
