//! Benchmark harness: input formats, stream generation, replay and result
//! aggregation.

pub mod generate;
pub mod io;
pub mod profile;
pub mod replay;
pub mod stats;
pub mod stream;

use thiserror::Error;

pub use generate::{bounded_degree, churn_stream, gnm, ChurnSpec};
pub use io::{parse_static_edgelist, parse_temporal, write_static, write_temporal, StaticGraph, TemporalCleanup};
pub use profile::{parse_tau_grid, perf_profile, read_results_csv, write_results_csv, Observation, PerfProfile};
pub use replay::{replay, replay_once, Algorithm, Counters, DynamicMatcher, ReplayOptions, RunResult, StaticOptimum};
pub use stats::geometric_mean;
pub use stream::{gen_insertion_stream, gen_undo_suffix, Provenance, UpdateKind, UpdateOp, UpdateStream};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("update {seq}: {reason}")]
    InvalidOp { seq: usize, reason: String },
    #[error("invariant violated after update {seq}: {message}")]
    Audit { seq: usize, message: String },
    #[error("algorithm failed: {0}")]
    Algorithm(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl PartialEq for HarnessError {
    fn eq(&self, other: &Self) -> bool {
        self.to_string() == other.to_string()
    }
}
