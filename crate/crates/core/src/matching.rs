//! Matching state shared by every algorithm: mates, per-vertex matched edge
//! weight, and the maintained total.

use thiserror::Error;

use crate::graph::{DynamicGraph, VertexId};
use crate::path::WalkPath;
use crate::scalar::Weight;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("vertex {0} is already matched")]
    AlreadyMatched(VertexId),
    #[error("vertex {0} is not matched")]
    NotMatched(VertexId),
    #[error("cannot match vertex {0} with itself")]
    SelfMatch(VertexId),
    #[error("selected path edges {0} and {1} share a vertex")]
    DependentSelection(usize, usize),
    #[error("selection length {got} does not match path length {expected}")]
    SelectionLength { expected: usize, got: usize },
    #[error("vertex {0} on the path is matched to a vertex off the path")]
    OpenPath(VertexId),
    #[error("mate of {0} is {1:?} but mate of {1:?} disagrees")]
    Asymmetric(VertexId, Option<VertexId>),
    #[error("matched pair {0}-{1} is not an edge of the graph")]
    NotAnEdge(VertexId, VertexId),
    #[error("stored weight of matched pair {0}-{1} differs from the graph")]
    WeightMismatch(VertexId, VertexId),
    #[error("maintained weight {maintained} differs from recomputed weight {recomputed}")]
    TotalMismatch { maintained: String, recomputed: String },
    #[error("state has {state} vertices but graph has {graph}")]
    SizeMismatch { state: usize, graph: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchingState<W> {
    mate: Vec<Option<VertexId>>,
    // weight of the matched edge at each matched vertex, kept so a deleted
    // matched edge can still be subtracted from the total
    mate_weight: Vec<W>,
    total_weight: W,
    cardinality: usize,
}

impl<W: Weight> MatchingState<W> {
    pub fn new(n: usize) -> Self {
        MatchingState {
            mate: vec![None; n],
            mate_weight: vec![W::zero(); n],
            total_weight: W::zero(),
            cardinality: 0,
        }
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.mate.len()
    }

    #[inline]
    pub fn mate(&self, u: VertexId) -> Option<VertexId> {
        self.mate[u]
    }

    #[inline]
    pub fn is_free(&self, u: VertexId) -> bool {
        self.mate[u].is_none()
    }

    /// Weight of the matched edge at `u`, if matched.
    #[inline]
    pub fn mate_weight(&self, u: VertexId) -> Option<W> {
        self.mate[u].map(|_| self.mate_weight[u])
    }

    #[inline]
    pub fn total_weight(&self) -> W {
        self.total_weight
    }

    /// Number of matched edges.
    #[inline]
    pub fn cardinality(&self) -> usize {
        self.cardinality
    }

    #[inline]
    pub fn is_matched_pair(&self, u: VertexId, v: VertexId) -> bool {
        self.mate[u] == Some(v)
    }

    pub fn match_edge(&mut self, u: VertexId, v: VertexId, w: W) -> Result<(), MatchingError> {
        if u == v {
            return Err(MatchingError::SelfMatch(u));
        }
        if self.mate[u].is_some() {
            return Err(MatchingError::AlreadyMatched(u));
        }
        if self.mate[v].is_some() {
            return Err(MatchingError::AlreadyMatched(v));
        }
        self.mate[u] = Some(v);
        self.mate[v] = Some(u);
        self.mate_weight[u] = w;
        self.mate_weight[v] = w;
        self.total_weight += w;
        self.cardinality += 1;
        Ok(())
    }

    /// Unmatches `u` and its mate; returns the former mate and edge weight.
    pub fn unmatch(&mut self, u: VertexId) -> Result<(VertexId, W), MatchingError> {
        let v = self.mate[u].ok_or(MatchingError::NotMatched(u))?;
        let w = self.mate_weight[u];
        self.mate[u] = None;
        self.mate[v] = None;
        self.mate_weight[u] = W::zero();
        self.mate_weight[v] = W::zero();
        self.total_weight -= w;
        self.cardinality -= 1;
        Ok((v, w))
    }

    pub fn clear(&mut self) {
        self.mate.iter_mut().for_each(|m| *m = None);
        self.mate_weight.iter_mut().for_each(|w| *w = W::zero());
        self.total_weight = W::zero();
        self.cardinality = 0;
    }

    /// Matched edges as `(min, max, weight)` in ascending order of `min`.
    pub fn matched_edges(&self) -> impl Iterator<Item = (VertexId, VertexId, W)> + '_ {
        self.mate.iter().enumerate().filter_map(move |(u, m)| match *m {
            Some(v) if u < v => Some((u, v, self.mate_weight[u])),
            _ => None,
        })
    }

    /// Replaces the matching on `path` by the edges flagged in `selected`.
    ///
    /// Every previously matched path edge is unmatched first. The selection
    /// must be independent, and every endpoint of a selected edge must be
    /// either free or matched along the path; otherwise nothing changes.
    pub fn apply_path_matching(
        &mut self,
        path: &WalkPath<W>,
        selected: &[bool],
    ) -> Result<(), MatchingError> {
        let k = path.len();
        if selected.len() != k {
            return Err(MatchingError::SelectionLength {
                expected: k,
                got: selected.len(),
            });
        }
        for i in 1..k {
            if selected[i - 1] && selected[i] {
                return Err(MatchingError::DependentSelection(i - 1, i));
            }
        }
        // node j touches edges j-1 and j; a matched node must be matched
        // along one of them or the replacement would break feasibility
        let nodes = path.nodes();
        for (i, _) in selected.iter().enumerate().filter(|(_, &s)| s) {
            for j in [i, i + 1] {
                let x = nodes[j];
                if let Some(m) = self.mate[x] {
                    let left = j > 0 && path.is_matched(j - 1) && nodes[j - 1] == m;
                    let right = j < k && path.is_matched(j) && nodes[j + 1] == m;
                    if !(left || right) {
                        return Err(MatchingError::OpenPath(x));
                    }
                }
            }
        }
        for i in 0..k {
            if path.is_matched(i) {
                let (a, b) = (nodes[i], nodes[i + 1]);
                if self.mate[a] == Some(b) {
                    self.unmatch(a)?;
                }
            }
        }
        for (i, _) in selected.iter().enumerate().filter(|(_, &s)| s) {
            self.match_edge(nodes[i], nodes[i + 1], path.weight(i))?;
        }
        Ok(())
    }

    /// Sum of the weights of the matched edges, read from `g`.
    pub fn recompute_weight(&self, g: &DynamicGraph<W>) -> Result<W, MatchingError> {
        let mut total = W::zero();
        for (u, v, _) in self.matched_edges() {
            total += g.weight(u, v).map_err(|_| MatchingError::NotAnEdge(u, v))?;
        }
        Ok(total)
    }

    /// Full consistency audit against `g`: mate symmetry, every matched pair
    /// is a current edge with the stored weight, and the maintained total and
    /// cardinality agree with a recomputation.
    pub fn audit(&self, g: &DynamicGraph<W>) -> Result<(), MatchingError> {
        if g.vertex_count() != self.vertex_count() {
            return Err(MatchingError::SizeMismatch {
                state: self.vertex_count(),
                graph: g.vertex_count(),
            });
        }
        let mut count = 0usize;
        let mut recomputed = W::zero();
        for u in 0..self.vertex_count() {
            if let Some(v) = self.mate[u] {
                if v == u || self.mate[v] != Some(u) {
                    return Err(MatchingError::Asymmetric(u, Some(v)));
                }
                if u > v {
                    continue;
                }
                let w = g.weight(u, v).map_err(|_| MatchingError::NotAnEdge(u, v))?;
                if !w.approx_eq(self.mate_weight[u]) || !w.approx_eq(self.mate_weight[v]) {
                    return Err(MatchingError::WeightMismatch(u, v));
                }
                recomputed += w;
                count += 1;
            }
        }
        if !recomputed.approx_eq(self.total_weight) || count != self.cardinality {
            return Err(MatchingError::TotalMismatch {
                maintained: format!("{} ({} edges)", self.total_weight, self.cardinality),
                recomputed: format!("{recomputed} ({count} edges)"),
            });
        }
        Ok(())
    }
}

impl<W: Weight> MatchingState<W> {
    /// `true` if no edge of `g` joins two free vertices.
    pub fn is_maximal(&self, g: &DynamicGraph<W>) -> bool {
        g.edges()
            .into_iter()
            .all(|(u, v, _)| !(self.is_free(u) && self.is_free(v)))
    }
}

impl<W: Weight> Default for MatchingState<W> {
    fn default() -> Self {
        MatchingState::new(0)
    }
}
