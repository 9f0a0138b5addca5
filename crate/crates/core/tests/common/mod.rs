//! Instance generators shared by the integration tests.
#![allow(dead_code)]

use dynmatch::harness::{churn_stream, ChurnSpec, UpdateKind, UpdateStream};
use dynmatch::oracle::{find_weight_augmenting_kpath, OracleLimits};
use dynmatch::{DynamicGraph, MatchingState};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random simple graph where each pair is an edge with probability `p`,
/// weights uniform in `1..=max_w`, degrees capped at `max_deg`.
pub fn random_graph(n: usize, p: f64, max_w: i64, max_deg: usize, rng: &mut ChaCha8Rng) -> DynamicGraph<i64> {
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(rng);
    let mut g = DynamicGraph::new(n);
    for (u, v) in pairs {
        if g.degree(u) < max_deg && g.degree(v) < max_deg && rng.random_bool(p) {
            g.insert_edge(u, v, rng.random_range(1..=max_w)).unwrap();
        }
    }
    g
}

/// Random maximal-by-chance matching: edges visited in random order, each
/// taken with probability `p` when both ends are free.
pub fn random_matching(g: &DynamicGraph<i64>, p: f64, rng: &mut ChaCha8Rng) -> MatchingState<i64> {
    let mut edges = g.edges();
    edges.shuffle(rng);
    let mut st = MatchingState::new(g.vertex_count());
    for (u, v, w) in edges {
        if st.is_free(u) && st.is_free(v) && rng.random_bool(p) {
            st.match_edge(u, v, w).unwrap();
        }
    }
    st
}

/// Oracle limits wide enough for every graph on at most 12 vertices.
pub const SMALL: OracleLimits = OracleLimits { max_vertices: 12, max_edges: 66 };

/// Flips weight-augmenting paths with fewer than `k` unmatched edges until
/// none is left.
pub fn remove_short_augmentations(g: &DynamicGraph<i64>, st: &mut MatchingState<i64>, k: usize) {
    let limits = SMALL;
    while let Some(p) = find_weight_augmenting_kpath(g, st, k - 1, &limits).unwrap() {
        let len = p.nodes.len();
        let edges: Vec<(usize, usize)> = if p.cycle {
            (0..len).map(|i| (p.nodes[i], p.nodes[(i + 1) % len])).collect()
        } else {
            p.nodes.windows(2).map(|e| (e[0], e[1])).collect()
        };
        let (matched, unmatched): (Vec<_>, Vec<_>) = edges.into_iter().partition(|&(a, b)| st.is_matched_pair(a, b));
        for (a, _) in matched {
            st.unmatch(a).unwrap();
        }
        for (a, b) in unmatched {
            st.match_edge(a, b, g.weight(a, b).unwrap()).unwrap();
        }
    }
}

/// Mixed stream on `n` vertices, optionally bipartite, with a cap on the
/// number of live edges.
pub fn churn(n: usize, ops: usize, left: Option<usize>, max_edges: usize, seed: u64) -> UpdateStream<i64> {
    churn_stream(&ChurnSpec { n, ops, insert_prob: 0.65, left, max_edges: Some(max_edges) }, seed)
}

/// Applies one update to `g`, returning the inserted weight for inserts.
pub fn apply(g: &mut DynamicGraph<i64>, u: usize, v: usize, kind: UpdateKind<i64>) -> Option<i64> {
    match kind {
        UpdateKind::Insert(w) => {
            assert!(g.insert_edge(u, v, w).unwrap());
            Some(w)
        }
        UpdateKind::Delete => {
            assert!(g.delete_edge(u, v).unwrap());
            None
        }
    }
}

/// Random insertion stream of a graph with bounded degree: the edges of
/// [`random_graph`] in random order, then a few deletions.
pub fn bounded_stream(n: usize, max_deg: usize, deletes: usize, rng: &mut ChaCha8Rng) -> UpdateStream<i64> {
    use dynmatch::harness::UpdateOp;
    let g = random_graph(n, 0.5, 100, max_deg, rng);
    let mut edges = g.edges();
    edges.shuffle(rng);
    let mut ops: Vec<UpdateOp<i64>> = edges.iter().map(|&(u, v, w)| UpdateOp::insert(u, v, w)).collect();
    edges.shuffle(rng);
    ops.extend(edges.iter().take(deletes).map(|&(u, v, _)| UpdateOp::delete(u, v)));
    UpdateStream::new(n, ops)
}
