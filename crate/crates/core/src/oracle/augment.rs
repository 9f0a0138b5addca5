//! Weight-augmenting alternating paths and the approximation bound they
//! imply.
//!
//! An alternating path or even alternating cycle `P` is weight-augmenting
//! for a matching `M` when `M ⊕ P` is a matching heavier than `M`. Its `k`
//! is the number of edges of `P` outside `M`. An endpoint whose path edge is
//! unmatched must be free, otherwise `M ⊕ P` would give it two mates.

use crate::graph::{DynamicGraph, VertexId};
use crate::matching::MatchingState;
use crate::scalar::Weight;

use super::{exact_mwm, OracleError, OracleLimits};

#[derive(Debug, Clone, PartialEq)]
pub struct AugmentingPath<W> {
    /// Vertices in order. For a cycle the first vertex is not repeated.
    pub nodes: Vec<VertexId>,
    /// Edges of the path outside the matching.
    pub k: usize,
    /// Weight gained by flipping the path.
    pub gain: W,
    pub cycle: bool,
}

/// Exhaustively searches alternating paths and cycles with at most `k_max`
/// unmatched edges and returns a weight-augmenting one with the fewest
/// unmatched edges.
pub fn find_weight_augmenting_kpath<W: Weight>(
    g: &DynamicGraph<W>,
    st: &MatchingState<W>,
    k_max: usize,
    limits: &OracleLimits,
) -> Result<Option<AugmentingPath<W>>, OracleError> {
    limits.check(g)?;
    if k_max == 0 {
        return Ok(None);
    }
    let mut s = PathSearch {
        g,
        st,
        k_max,
        on_path: vec![false; g.vertex_count()],
        nodes: Vec::new(),
        matched: Vec::new(),
        best: None,
    };
    for start in 0..g.vertex_count() {
        s.nodes.push(start);
        s.on_path[start] = true;
        s.extend(W::zero(), 0);
        s.on_path[start] = false;
        s.nodes.pop();
    }
    Ok(s.best)
}

/// Checks `w(M) >= (k-1)/k * w(M*)` for a matching that admits no
/// weight-augmenting path with fewer than `k` unmatched edges. Fails with a
/// contract error when such a path exists.
pub fn verify_proposition1<W: Weight>(
    g: &DynamicGraph<W>,
    st: &MatchingState<W>,
    k: usize,
    limits: &OracleLimits,
) -> Result<bool, OracleError> {
    if k < 1 {
        return Err(OracleError::Precondition("k must be at least 1".into()));
    }
    if let Some(p) = find_weight_augmenting_kpath(g, st, k - 1, limits)? {
        return Err(OracleError::Precondition(format!(
            "matching admits a weight-augmenting path with {} unmatched edges",
            p.k
        )));
    }
    let opt = exact_mwm(g, limits)?.weight;
    let kw = W::from_usize(k).expect("k fits the weight type");
    let lhs = st.total_weight() * kw;
    let rhs = opt * (kw - W::one());
    Ok(lhs >= rhs || lhs.approx_eq(rhs))
}

struct PathSearch<'a, W> {
    g: &'a DynamicGraph<W>,
    st: &'a MatchingState<W>,
    k_max: usize,
    on_path: Vec<bool>,
    nodes: Vec<VertexId>,
    // whether edge i (nodes[i], nodes[i+1]) is matched
    matched: Vec<bool>,
    best: Option<AugmentingPath<W>>,
}

impl<W: Weight> PathSearch<'_, W> {
    fn extend(&mut self, gain: W, k: usize) {
        let start = self.nodes[0];
        let cur = *self.nodes.last().unwrap();
        if let Some(b) = &self.best {
            if k >= b.k {
                return;
            }
        }
        if !self.matched.is_empty() {
            self.consider_path(gain, k);
        }
        let last = self.matched.last().copied();
        // the next edge must be matched iff the last one was not
        let want_matched = last.map(|m| !m);
        if want_matched != Some(false) {
            if let Some(m) = self.st.mate(cur) {
                let w = self.st.mate_weight(cur).unwrap();
                if m == start && self.nodes.len() >= 4 && !self.matched[0] {
                    self.consider_cycle(gain - w, k);
                } else if !self.on_path[m] {
                    self.push(m, true);
                    self.extend(gain - w, k);
                    self.pop();
                }
            }
        }
        if want_matched != Some(true) && k < self.k_max {
            for i in 0..self.g.degree(cur) {
                let (y, w) = self.g.neighbors(cur)[i];
                if self.st.is_matched_pair(cur, y) {
                    continue;
                }
                if y == start && self.nodes.len() >= 4 && self.matched[0] {
                    self.consider_cycle(gain + w, k + 1);
                } else if !self.on_path[y] {
                    self.push(y, false);
                    self.extend(gain + w, k + 1);
                    self.pop();
                }
            }
        }
    }

    fn consider_path(&mut self, gain: W, k: usize) {
        let first_free = !self.matched[0];
        let last_free = !*self.matched.last().unwrap();
        let start = self.nodes[0];
        let end = *self.nodes.last().unwrap();
        if first_free && !self.st.is_free(start) {
            return;
        }
        if last_free && !self.st.is_free(end) {
            return;
        }
        self.offer(gain, k, false);
    }

    fn consider_cycle(&mut self, gain: W, k: usize) {
        self.offer(gain, k, true);
    }

    fn offer(&mut self, gain: W, k: usize, cycle: bool) {
        if !(gain > W::zero()) || gain.approx_eq(W::zero()) {
            return;
        }
        if self.best.as_ref().is_none_or(|b| k < b.k) {
            self.best = Some(AugmentingPath { nodes: self.nodes.clone(), k, gain, cycle });
        }
    }

    fn push(&mut self, v: VertexId, matched: bool) {
        self.on_path[v] = true;
        self.nodes.push(v);
        self.matched.push(matched);
    }

    fn pop(&mut self) {
        let v = self.nodes.pop().unwrap();
        self.matched.pop();
        self.on_path[v] = false;
    }
}
