//! Exact reference solvers.
//!
//! Branch and bound and plain subset enumeration give two independent exact
//! maximum weight matchings for small graphs. An exhaustive alternating path
//! search finds weight-augmenting paths with few unmatched edges. A blossom
//! based solver supplies the optimum on graphs too large for enumeration.

mod augment;
mod blossom;
mod brute;

use thiserror::Error;

use crate::graph::DynamicGraph;
use crate::scalar::Weight;

pub use augment::{find_weight_augmenting_kpath, verify_proposition1, AugmentingPath};
pub use blossom::{blossom_mwm, max_weight_matching};
pub use brute::{enumerate_mwm, exact_mcm, exact_mwm, max_cardinality_matching, ExactMatching};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph with {vertices} vertices and {edges} edges exceeds the oracle limits ({max_vertices} vertices, {max_edges} edges)")]
    TooLarge {
        vertices: usize,
        edges: usize,
        max_vertices: usize,
        max_edges: usize,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Size guard for the exponential solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_vertices: usize,
    pub max_edges: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_vertices: 20,
            max_edges: 24,
        }
    }
}

impl OracleLimits {
    pub fn allows<W: Weight>(&self, g: &DynamicGraph<W>) -> bool {
        g.vertex_count() <= self.max_vertices && g.edge_count() <= self.max_edges
    }

    pub fn check<W: Weight>(&self, g: &DynamicGraph<W>) -> Result<(), OracleError> {
        if self.allows(g) {
            Ok(())
        } else {
            Err(OracleError::TooLarge {
                vertices: g.vertex_count(),
                edges: g.edge_count(),
                max_vertices: self.max_vertices,
                max_edges: self.max_edges,
            })
        }
    }
}

/// Optimum weight of `g`: branch and bound within `limits`, the blossom
/// solver otherwise.
pub fn optimum_weight<W: Weight>(g: &DynamicGraph<W>, limits: &OracleLimits) -> W {
    match exact_mwm(g, limits) {
        Ok(m) => m.weight,
        Err(_) => blossom_mwm(g).1,
    }
}
