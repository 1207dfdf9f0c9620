//! Experiment runner for the `qikm` CLI.
//!
//! An experiment is one dataset, a list of methods and a list of seeds. For
//! every (method, seed) pair the runner performs `restarts` independent
//! k-means runs, keeps one of them according to the selection rule, and
//! scores it with ARI against the true labels and silhouette on the scaled
//! features.

pub mod config;
pub mod report;
pub mod runner;

use thiserror::Error;

pub use config::{ExperimentConfig, MethodName, MethodSpec, Selection};
pub use report::{emit_report, read_runs_csv, Format};
pub use runner::{run_experiment, Report, RunRow};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("config error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(#[from] qikm_core::DataError),
    #[error("run failed: {0}")]
    Runtime(String),
}

impl BenchError {
    /// Process exit status for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config(_) => 1,
            BenchError::Data(_) => 2,
            BenchError::Runtime(_) => 3,
        }
    }
}

impl From<qikm_core::ClusteringError> for BenchError {
    fn from(e: qikm_core::ClusteringError) -> Self {
        BenchError::Runtime(e.to_string())
    }
}
