//! Random instances.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::VertexId;
use crate::scalar::Weight;

use super::io::StaticGraph;
use super::stream::{random_weight, UpdateOp, UpdateStream};

/// Uniform random simple graph with `n` vertices and `m` edges (G(n, m)),
/// weights uniform in the generated range.
pub fn gnm<W: Weight>(n: usize, m: usize, seed: u64) -> StaticGraph<W> {
    let max_edges = n * n.saturating_sub(1) / 2;
    assert!(m <= max_edges, "{m} edges do not fit on {n} vertices");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if seen.insert(key) {
            edges.push((key.0, key.1, Some(random_weight(&mut rng))));
        }
    }
    StaticGraph { n, edges, source: Some(format!("gnm-{n}-{m}-{seed}")), ..StaticGraph::default() }
}

/// Random graph in which no vertex exceeds `max_degree`: `attempts` random
/// vertex pairs are tried and kept when both endpoints still have room.
pub fn bounded_degree<W: Weight>(n: usize, max_degree: usize, attempts: usize, seed: u64) -> StaticGraph<W> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut deg = vec![0usize; n];
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    for _ in 0..attempts {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v || deg[u] >= max_degree || deg[v] >= max_degree {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if seen.insert(key) {
            deg[u] += 1;
            deg[v] += 1;
            edges.push((key.0, key.1, Some(random_weight(&mut rng))));
        }
    }
    StaticGraph { n, edges, source: Some(format!("bounded-{n}-{max_degree}-{seed}")), ..StaticGraph::default() }
}

/// Mixed stream on `n` vertices: each step inserts a new random edge with
/// probability `insert_prob` (always while the graph is empty) and deletes a
/// uniformly random present edge otherwise. Inserts may be restricted to
/// pairs across the bipartition `0..left` / `left..n`.
#[derive(Debug, Clone)]
pub struct ChurnSpec {
    pub n: usize,
    pub ops: usize,
    pub insert_prob: f64,
    pub left: Option<usize>,
    pub max_edges: Option<usize>,
}

pub fn churn_stream<W: Weight>(spec: &ChurnSpec, seed: u64) -> UpdateStream<W> {
    let n = spec.n;
    assert!(n >= 2, "churn needs at least two vertices");
    let capacity = match spec.left {
        Some(l) => l * (n - l),
        None => n * (n - 1) / 2,
    };
    let cap = spec.max_edges.unwrap_or(capacity).min(capacity);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut present: Vec<(VertexId, VertexId)> = Vec::new();
    let mut index: std::collections::HashMap<(VertexId, VertexId), usize> = Default::default();
    let mut ops = Vec::with_capacity(spec.ops);
    while ops.len() < spec.ops && cap > 0 {
        let insert = present.is_empty() || (present.len() < cap && rng.random_bool(spec.insert_prob));
        if insert {
            let (u, v) = loop {
                let (u, v) = match spec.left {
                    Some(l) => (rng.random_range(0..l), rng.random_range(l..n)),
                    None => (rng.random_range(0..n), rng.random_range(0..n)),
                };
                if u != v && !index.contains_key(&(u.min(v), u.max(v))) {
                    break (u, v);
                }
            };
            index.insert((u.min(v), u.max(v)), present.len());
            present.push((u.min(v), u.max(v)));
            ops.push(UpdateOp::insert(u, v, random_weight(&mut rng)));
        } else {
            let i = rng.random_range(0..present.len());
            let key = present.swap_remove(i);
            index.remove(&key);
            if i < present.len() {
                index.insert(present[i], i);
            }
            ops.push(UpdateOp::delete(key.0, key.1));
        }
    }
    UpdateStream::new(n, ops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DynamicGraph;

    #[test]
    fn gnm_is_simple_and_seeded() {
        let g: StaticGraph<i64> = gnm(50, 200, 3);
        assert_eq!(g.edges.len(), 200);
        assert_eq!(g, gnm(50, 200, 3));
        let dg = DynamicGraph::from_edges(50, g.edges.iter().map(|&(u, v, w)| (u, v, w.unwrap()))).unwrap();
        assert_eq!(dg.edge_count(), 200);
    }

    #[test]
    fn bounded_degree_respects_the_bound() {
        let g: StaticGraph<i64> = bounded_degree(12, 4, 200, 1);
        let mut deg = [0; 12];
        for &(u, v, _) in &g.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        assert!(deg.iter().all(|&d| d <= 4));
        assert!(!g.edges.is_empty());
    }

    #[test]
    fn churn_streams_are_valid() {
        for seed in 0..20 {
            let spec = ChurnSpec { n: 10, ops: 300, insert_prob: 0.6, left: None, max_edges: Some(15) };
            let s: UpdateStream<i64> = churn_stream(&spec, seed);
            assert_eq!(s.len(), 300);
            s.validate().unwrap();
            assert!(s.final_edges().len() <= 15);
            let spec = ChurnSpec { left: Some(4), ..spec };
            let s: UpdateStream<i64> = churn_stream(&spec, seed);
            s.validate().unwrap();
            assert!(s.ops.iter().all(|op| (op.u < 4) != (op.v < 4)));
        }
    }
}
