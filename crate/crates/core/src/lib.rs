//! Fully-dynamic approximate maximum weight matching.
//!
//! Two algorithms maintain a weighted matching under edge insertions and
//! deletions:
//!
//! * [`DynMwmRandom`] searches random alternating paths around each update
//!   and solves every path exactly by dynamic programming.
//! * [`DynMwmLevel`] buckets edges into geometric weight levels, keeps a
//!   dynamic cardinality matching per level and merges them greedily.
//!
//! The [`oracle`] module holds exact reference solvers and the [`harness`]
//! module the stream formats, generators and replay machinery used by the
//! `dynmatch` CLI.

pub mod graph;
pub mod harness;
pub mod level;
pub mod matching;
pub mod mcm;
pub mod oracle;
pub mod path;
pub mod random_walk;
pub mod scalar;

pub use graph::{DynamicGraph, GraphError, VertexId};
pub use level::{DynMwmLevel, LevelConfig};
pub use matching::{MatchingError, MatchingState};
pub use mcm::{DynMcm, McmConfig, McmKind};
pub use path::{Eligibility, WalkPath};
pub use random_walk::{DynMwmRandom, RandomConfig};
pub use scalar::Weight;

/// Graph with integer weights.
pub type Graph = DynamicGraph<i64>;
/// Matching with integer weights.
pub type Matching = MatchingState<i64>;
/// Graph with real weights.
pub type GraphF64 = DynamicGraph<f64>;
/// Matching with real weights.
pub type MatchingF64 = MatchingState<f64>;
