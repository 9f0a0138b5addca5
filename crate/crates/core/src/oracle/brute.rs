//! Exponential exact solvers for small graphs.

use crate::graph::{DynamicGraph, VertexId};
use crate::scalar::Weight;

use super::{OracleError, OracleLimits};

/// A matching as sorted `(min, max, weight)` edges plus its weight.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMatching<W> {
    pub edges: Vec<(VertexId, VertexId, W)>,
    pub weight: W,
}

impl<W: Weight> ExactMatching<W> {
    pub fn cardinality(&self) -> usize {
        self.edges.len()
    }

    /// Mate array over `n` vertices.
    pub fn mates(&self, n: usize) -> Vec<Option<VertexId>> {
        let mut mate = vec![None; n];
        for &(u, v, _) in &self.edges {
            mate[u] = Some(v);
            mate[v] = Some(u);
        }
        mate
    }
}

/// Maximum weight matching by branch and bound. Vertices are decided in
/// ascending order: the lowest undecided vertex is matched to each
/// undecided neighbor in ascending order, then left unmatched. A branch is
/// cut when even matching every undecided vertex along its heaviest
/// available edge cannot beat the incumbent.
pub fn exact_mwm<W: Weight>(g: &DynamicGraph<W>, limits: &OracleLimits) -> Result<ExactMatching<W>, OracleError> {
    limits.check(g)?;
    Ok(branch_and_bound(g, |w| w))
}

/// Size of a maximum cardinality matching.
pub fn exact_mcm<W: Weight>(g: &DynamicGraph<W>, limits: &OracleLimits) -> Result<usize, OracleError> {
    Ok(max_cardinality_matching(g, limits)?.cardinality())
}

/// A maximum cardinality matching; edge weights are carried through but do
/// not influence the choice.
pub fn max_cardinality_matching<W: Weight>(
    g: &DynamicGraph<W>,
    limits: &OracleLimits,
) -> Result<ExactMatching<W>, OracleError> {
    limits.check(g)?;
    let unit = branch_and_bound(g, |_| 1i64);
    let weight = unit.edges.iter().map(|e| e.2).sum();
    Ok(ExactMatching { edges: unit.edges, weight })
}

/// Maximum weight matching by plain enumeration of every edge subset.
/// Independent of [`exact_mwm`]; practical up to about 20 edges.
pub fn enumerate_mwm<W: Weight>(g: &DynamicGraph<W>, limits: &OracleLimits) -> Result<ExactMatching<W>, OracleError> {
    limits.check(g)?;
    let edges = g.edges();
    let m = edges.len();
    let n = g.vertex_count();
    let mut best_mask = 0u64;
    let mut best = W::zero();
    let mut used = vec![false; n];
    for mask in 0u64..(1u64 << m) {
        used.iter_mut().for_each(|x| *x = false);
        let mut total = W::zero();
        let mut ok = true;
        for (i, &(u, v, w)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                if used[u] || used[v] {
                    ok = false;
                    break;
                }
                used[u] = true;
                used[v] = true;
                total += w;
            }
        }
        if ok && total > best {
            best = total;
            best_mask = mask;
        }
    }
    let chosen = edges
        .iter()
        .enumerate()
        .filter(|&(i, _)| best_mask >> i & 1 == 1)
        .map(|(_, &e)| e)
        .collect();
    Ok(ExactMatching { edges: chosen, weight: best })
}

fn branch_and_bound<W: Weight, V: Weight>(g: &DynamicGraph<W>, value: impl Fn(W) -> V) -> ExactMatching<W> {
    let n = g.vertex_count();
    let mut adj: Vec<Vec<(VertexId, V, W)>> = (0..n)
        .map(|u| g.neighbors(u).iter().map(|&(v, w)| (v, value(w), w)).collect())
        .collect();
    for list in &mut adj {
        list.sort_by_key(|e| e.0);
    }
    let mut search = Search {
        adj,
        decided: vec![false; n],
        current: Vec::new(),
        current_value: V::zero(),
        best: Vec::new(),
        best_value: V::zero(),
    };
    search.run(0);
    let mut edges = search.best;
    edges.sort_by_key(|e| (e.0, e.1));
    let weight = edges.iter().map(|e| e.2).sum();
    ExactMatching { edges, weight }
}

struct Search<V, W> {
    adj: Vec<Vec<(VertexId, V, W)>>,
    decided: Vec<bool>,
    current: Vec<(VertexId, VertexId, W)>,
    current_value: V,
    best: Vec<(VertexId, VertexId, W)>,
    best_value: V,
}

impl<V: Weight, W: Weight> Search<V, W> {
    // twice the optimistic value still reachable from undecided vertices
    fn double_bound(&self) -> V {
        let mut sum = V::zero();
        for (u, list) in self.adj.iter().enumerate() {
            if self.decided[u] {
                continue;
            }
            let mut top: Option<V> = None;
            for &(v, val, _) in list {
                if !self.decided[v] && top.is_none_or(|t| val > t) {
                    top = Some(val);
                }
            }
            if let Some(t) = top {
                sum += t;
            }
        }
        sum
    }

    fn run(&mut self, from: VertexId) {
        let n = self.adj.len();
        let Some(u) = (from..n).find(|&u| !self.decided[u]) else {
            if self.current_value > self.best_value {
                self.best_value = self.current_value;
                self.best = self.current.clone();
            }
            return;
        };
        let twice_current = self.current_value + self.current_value;
        let twice_best = self.best_value + self.best_value;
        if twice_current + self.double_bound() <= twice_best {
            return;
        }
        self.decided[u] = true;
        for i in 0..self.adj[u].len() {
            let (v, val, w) = self.adj[u][i];
            if self.decided[v] {
                continue;
            }
            self.decided[v] = true;
            self.current.push((u.min(v), u.max(v), w));
            self.current_value += val;
            self.run(u + 1);
            self.current_value -= val;
            self.current.pop();
            self.decided[v] = false;
        }
        self.run(u + 1);
        self.decided[u] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, e: &[(usize, usize, i64)]) -> DynamicGraph<i64> {
        DynamicGraph::from_edges(n, e.iter().copied()).unwrap()
    }

    #[test]
    fn mwm_examples() {
        let lim = OracleLimits::default();
        let tri = graph(3, &[(0, 1, 1), (1, 2, 2), (0, 2, 3)]);
        let r = exact_mwm(&tri, &lim).unwrap();
        assert_eq!(r.weight, 3);
        assert_eq!(r.edges, vec![(0, 2, 3)]);
        let empty = graph(4, &[]);
        assert_eq!(exact_mwm(&empty, &lim).unwrap(), ExactMatching { edges: vec![], weight: 0 });
        let p4 = graph(4, &[(0, 1, 5), (1, 2, 1), (2, 3, 5)]);
        assert_eq!(exact_mwm(&p4, &lim).unwrap().weight, 10);
        assert_eq!(enumerate_mwm(&p4, &lim).unwrap().weight, 10);
    }

    #[test]
    fn mcm_examples() {
        let lim = OracleLimits::default();
        let c4 = graph(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]);
        assert_eq!(exact_mcm(&c4, &lim), Ok(2));
        let star = graph(6, &[(0, 1, 9), (0, 2, 1), (0, 3, 1), (0, 4, 1), (0, 5, 1)]);
        assert_eq!(exact_mcm(&star, &lim), Ok(1));
        assert_eq!(exact_mcm(&graph(3, &[]), &lim), Ok(0));
        // cardinality wins over weight
        let p4 = graph(4, &[(0, 1, 1), (1, 2, 100), (2, 3, 1)]);
        let m = max_cardinality_matching(&p4, &lim).unwrap();
        assert_eq!((m.cardinality(), m.weight), (2, 2));
    }

    #[test]
    fn limits_are_enforced() {
        let lim = OracleLimits { max_vertices: 3, max_edges: 24 };
        assert!(matches!(exact_mwm(&graph(4, &[]), &lim), Err(OracleError::TooLarge { .. })));
        let lim = OracleLimits { max_vertices: 20, max_edges: 1 };
        let p3 = graph(3, &[(0, 1, 1), (1, 2, 1)]);
        assert!(exact_mcm(&p3, &lim).is_err());
        assert!(enumerate_mwm(&p3, &lim).is_err());
    }
}
