//! Fully-dynamic undirected weighted simple graph.
//!
//! Every vertex `u` keeps a neighbor vector `L_u` (neighbor and edge weight)
//! plus a hash index `H_u` from neighbor to its position in `L_u`. Insertion
//! appends, deletion swap-removes, so both run in expected constant time and a
//! uniformly random neighbor is one index draw away.

use rand::Rng;
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::scalar::Weight;

/// Dense vertex index in `[0, n)`.
pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("edge weight {0} is not strictly positive")]
    InvalidWeight(String),
    #[error("no edge between {0} and {1}")]
    MissingEdge(VertexId, VertexId),
}

#[derive(Debug, Clone)]
pub struct DynamicGraph<W> {
    adjacency: Vec<Vec<(VertexId, W)>>,
    positions: Vec<FxHashMap<VertexId, usize>>,
    edge_count: usize,
    max_degree_seen: usize,
}

impl<W: Weight> DynamicGraph<W> {
    /// Empty graph on a fixed vertex set `0..n`.
    pub fn new(n: usize) -> Self {
        DynamicGraph {
            adjacency: vec![Vec::new(); n],
            positions: vec![FxHashMap::default(); n],
            edge_count: 0,
            max_degree_seen: 0,
        }
    }

    /// Builds a graph from an edge list, skipping duplicates.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId, W)>,
    ) -> Result<Self, GraphError> {
        let mut g = DynamicGraph::new(n);
        for (u, v, w) in edges {
            g.insert_edge(u, v, w)?;
        }
        Ok(g)
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Largest degree any vertex has reached since construction.
    #[inline]
    pub fn max_degree_seen(&self) -> usize {
        self.max_degree_seen
    }

    #[inline]
    pub fn degree(&self, u: VertexId) -> usize {
        self.adjacency[u].len()
    }

    /// The neighbor vector `L_u` in its current (swap-remove) order.
    #[inline]
    pub fn neighbors(&self, u: VertexId) -> &[(VertexId, W)] {
        &self.adjacency[u]
    }

    #[inline]
    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.vertex_count() && self.positions[u].contains_key(&v)
    }

    pub fn weight(&self, u: VertexId, v: VertexId) -> Result<W, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        self.positions[u]
            .get(&v)
            .map(|&p| self.adjacency[u][p].1)
            .ok_or(GraphError::MissingEdge(u, v))
    }

    /// Position of `v` inside `L_u`, if adjacent.
    pub fn position(&self, u: VertexId, v: VertexId) -> Option<usize> {
        self.positions.get(u)?.get(&v).copied()
    }

    /// Inserts `{u, v}` with weight `w`. Returns `false` without touching the
    /// graph when the edge already exists.
    pub fn insert_edge(&mut self, u: VertexId, v: VertexId, w: W) -> Result<bool, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if !w.is_valid_weight() {
            return Err(GraphError::InvalidWeight(w.to_string()));
        }
        if self.positions[u].contains_key(&v) {
            return Ok(false);
        }
        self.push_half(u, v, w);
        self.push_half(v, u, w);
        self.edge_count += 1;
        self.max_degree_seen = self
            .max_degree_seen
            .max(self.adjacency[u].len())
            .max(self.adjacency[v].len());
        Ok(true)
    }

    /// Removes `{u, v}`, returning its weight, or `None` if it was absent.
    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> Result<Option<W>, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let Some(w) = self.swap_remove_half(u, v) else {
            return Ok(None);
        };
        self.swap_remove_half(v, u);
        self.edge_count -= 1;
        Ok(Some(w))
    }

    /// Removes `{u, v}`; `false` if it was absent.
    pub fn delete_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        Ok(self.remove_edge(u, v)?.is_some())
    }

    /// Uniformly random element of `L_u`, `None` for an isolated vertex.
    #[inline]
    pub fn random_neighbor<R: Rng + ?Sized>(&self, u: VertexId, rng: &mut R) -> Option<VertexId> {
        let list = &self.adjacency[u];
        if list.is_empty() {
            None
        } else {
            Some(list[rng.random_range(0..list.len())].0)
        }
    }

    /// Like [`random_neighbor`](Self::random_neighbor), also returning the
    /// edge weight.
    #[inline]
    pub fn random_incident<R: Rng + ?Sized>(&self, u: VertexId, rng: &mut R) -> Option<(VertexId, W)> {
        let list = &self.adjacency[u];
        if list.is_empty() {
            None
        } else {
            Some(list[rng.random_range(0..list.len())])
        }
    }

    /// All edges as `(min, max, weight)`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(VertexId, VertexId, W)> {
        let mut out: Vec<_> = self
            .adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| {
                list.iter()
                    .filter(move |&&(v, _)| u < v)
                    .map(move |&(v, w)| (u, v, w))
            })
            .collect();
        out.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        out
    }

    /// Checks symmetry, simplicity, index coherence, edge count and the
    /// running maximum degree. Returns a description of the first violation.
    pub fn check_invariants(&self) -> Result<(), String> {
        let n = self.vertex_count();
        let mut half_edges = 0usize;
        for u in 0..n {
            let list = &self.adjacency[u];
            if list.len() != self.positions[u].len() {
                return Err(format!("vertex {u}: |L_u| != |H_u|"));
            }
            if list.len() > self.max_degree_seen {
                return Err(format!("vertex {u}: degree above max_degree_seen"));
            }
            for (i, &(v, w)) in list.iter().enumerate() {
                if v == u {
                    return Err(format!("self-loop at {u}"));
                }
                if self.positions[u].get(&v) != Some(&i) {
                    return Err(format!("H_{u}({v}) does not point at position {i}"));
                }
                match self.positions[v].get(&u) {
                    Some(&p) if self.adjacency[v][p].1.approx_eq(w) => {}
                    _ => return Err(format!("edge {u}-{v} not mirrored with equal weight")),
                }
            }
            half_edges += list.len();
        }
        if half_edges != 2 * self.edge_count {
            return Err(format!(
                "edge count {} does not match adjacency total {}",
                self.edge_count, half_edges
            ));
        }
        Ok(())
    }

    fn push_half(&mut self, u: VertexId, v: VertexId, w: W) {
        let list = &mut self.adjacency[u];
        self.positions[u].insert(v, list.len());
        list.push((v, w));
    }

    fn swap_remove_half(&mut self, u: VertexId, v: VertexId) -> Option<W> {
        let pos = self.positions[u].remove(&v)?;
        let list = &mut self.adjacency[u];
        let (_, w) = list.swap_remove(pos);
        if pos < list.len() {
            let moved = list[pos].0;
            self.positions[u].insert(moved, pos);
        }
        Some(w)
    }

    #[inline]
    fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.vertex_count(),
            })
        }
    }
}
