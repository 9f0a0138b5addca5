use std::collections::BTreeMap;

use dynmatch::{DynamicGraph, GraphError};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn coherent(g: &DynamicGraph<i64>) -> bool {
    (0..g.vertex_count()).all(|u| {
        g.neighbors(u)
            .iter()
            .enumerate()
            .all(|(i, &(v, w))| g.position(u, v) == Some(i) && g.weight(v, u) == Ok(w))
    })
}

#[test]
fn random_operations_round_trip() {
    let n = 200;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut g = DynamicGraph::<i64>::new(n);
    let mut model: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for step in 0..100_000 {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v {
            assert_eq!(g.insert_edge(u, v, 1), Err(GraphError::SelfLoop(u)));
            continue;
        }
        let key = (u.min(v), u.max(v));
        if rng.random_bool(0.55) {
            let w = rng.random_range(1..=100);
            let fresh = g.insert_edge(u, v, w).unwrap();
            assert_eq!(fresh, !model.contains_key(&key));
            model.entry(key).or_insert(w);
        } else {
            assert_eq!(g.delete_edge(u, v).unwrap(), model.remove(&key).is_some());
        }
        if step < 10_000 {
            assert!(coherent(&g), "position index broken at step {step}");
        }
    }
    g.check_invariants().unwrap();
    let rebuilt = DynamicGraph::from_edges(n, g.edges()).unwrap();
    for u in 0..n {
        assert_eq!(g.degree(u), rebuilt.degree(u));
        let mut a = g.neighbors(u).to_vec();
        let mut b = rebuilt.neighbors(u).to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }
    let expected: Vec<_> = model.iter().map(|(&(u, v), &w)| (u, v, w)).collect();
    let mut edges = g.edges();
    edges.sort();
    assert_eq!(edges, expected);
    assert_eq!(g.edge_count(), model.len());
}

/// Pearson statistic of observed counts against a uniform expectation.
fn chi_squared(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    let e = total as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum()
}

#[test]
fn random_neighbor_is_uniform() {
    let mut g = DynamicGraph::<i64>::new(12);
    for v in 1..12 {
        g.insert_edge(0, v, v as i64).unwrap();
    }
    // churn the adjacency order first
    g.delete_edge(0, 3).unwrap();
    g.delete_edge(0, 7).unwrap();
    g.insert_edge(0, 3, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut counts = vec![0usize; 12];
    for _ in 0..100_000 {
        counts[g.random_neighbor(0, &mut rng).unwrap()] += 1;
    }
    assert_eq!(counts[0], 0);
    assert_eq!(counts[7], 0);
    let present: Vec<usize> = (1..12).filter(|&v| v != 7).map(|v| counts[v]).collect();
    // 9 degrees of freedom, critical value at 0.001
    assert!(chi_squared(&present) < 27.88, "{present:?}");
    assert_eq!(DynamicGraph::<i64>::new(3).random_neighbor(1, &mut rng), None);
}

proptest! {
    #[test]
    fn insert_then_delete_restores_degrees(
        ops in prop::collection::vec((0usize..15, 0usize..15, 1i64..=100), 0..80),
    ) {
        let mut g = DynamicGraph::<i64>::new(15);
        let mut added = Vec::new();
        for (u, v, w) in ops {
            if u != v && g.insert_edge(u, v, w).unwrap() {
                added.push((u, v));
            }
        }
        prop_assert!(coherent(&g));
        for (u, v) in added.into_iter().rev() {
            prop_assert!(g.delete_edge(v, u).unwrap());
        }
        prop_assert_eq!(g.edge_count(), 0);
        prop_assert!((0..15).all(|u| g.degree(u) == 0));
    }
}
