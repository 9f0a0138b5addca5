mod common;

use common::{random_graph, random_matching, remove_short_augmentations, rng};
use dynmatch::oracle::{
    blossom_mwm, enumerate_mwm, exact_mcm, exact_mwm, find_weight_augmenting_kpath, max_weight_matching,
    verify_proposition1, OracleError, OracleLimits,
};
use dynmatch::{DynamicGraph, MatchingState};
use proptest::prelude::*;

fn is_matching(n: usize, edges: &[(usize, usize, i64)], g: &DynamicGraph<i64>) -> bool {
    let mut used = vec![false; n];
    edges.iter().all(|&(u, v, w)| {
        let ok = !used[u] && !used[v] && g.weight(u, v) == Ok(w);
        used[u] = true;
        used[v] = true;
        ok
    })
}

#[test]
fn three_exact_solvers_agree() {
    let limits = OracleLimits { max_vertices: 20, max_edges: 20 };
    let mut r = rng(1);
    for trial in 0..400 {
        let n = 4 + trial % 9;
        let g = random_graph(n, 0.45, 100, n, &mut r);
        if g.edge_count() > 16 {
            continue;
        }
        let bb = exact_mwm(&g, &limits).unwrap();
        let en = enumerate_mwm(&g, &limits).unwrap();
        let (bl_edges, bl) = blossom_mwm(&g);
        assert_eq!(bb.weight, en.weight, "trial {trial}");
        assert_eq!(bb.weight, bl, "trial {trial}");
        assert!(is_matching(n, &bb.edges, &g));
        assert!(is_matching(n, &bl_edges, &g));
        assert_eq!(bb.edges.iter().map(|e| e.2).sum::<i64>(), bb.weight);
    }
}

#[test]
fn blossom_matches_branch_and_bound_on_larger_graphs() {
    let limits = OracleLimits { max_vertices: 20, max_edges: 40 };
    let mut r = rng(2);
    for _ in 0..60 {
        let g = random_graph(16, 0.25, 1000, 16, &mut r);
        if !limits.allows(&g) {
            continue;
        }
        assert_eq!(exact_mwm(&g, &limits).unwrap().weight, blossom_mwm(&g).1);
    }
}

#[test]
fn cardinality_oracle_matches_unit_blossom() {
    let mut r = rng(3);
    for _ in 0..200 {
        let g = random_graph(10, 0.3, 1, 10, &mut r);
        let mates = max_weight_matching(10, &g.edges());
        let blossom_card = mates.iter().flatten().count() / 2;
        assert_eq!(exact_mcm(&g, &OracleLimits::default()).unwrap(), blossom_card);
    }
}

#[test]
fn oracle_refuses_large_graphs() {
    let g = random_graph(30, 0.5, 10, 30, &mut rng(4));
    assert!(matches!(exact_mwm(&g, &OracleLimits::default()), Err(OracleError::TooLarge { .. })));
}

#[test]
fn optimum_has_no_augmenting_path() {
    let limits = OracleLimits::default();
    let mut r = rng(5);
    for _ in 0..100 {
        let g = random_graph(9, 0.4, 50, 9, &mut r);
        let opt = exact_mwm(&g, &limits).unwrap();
        let mut st = MatchingState::new(9);
        for &(u, v, w) in &opt.edges {
            st.match_edge(u, v, w).unwrap();
        }
        assert_eq!(find_weight_augmenting_kpath(&g, &st, 9, &limits).unwrap(), None);
    }
}

#[test]
fn local_optima_satisfy_the_bound() {
    let limits = OracleLimits::default();
    let mut r = rng(6);
    for k in 2..=4 {
        for _ in 0..60 {
            let g = random_graph(9, 0.4, 100, 4, &mut r);
            let mut st = random_matching(&g, 0.5, &mut r);
            remove_short_augmentations(&g, &mut st, k);
            assert_eq!(verify_proposition1(&g, &st, k, &limits), Ok(true));
        }
    }
}

#[test]
fn precondition_is_checked() {
    let g = DynamicGraph::from_edges(2, [(0, 1, 5i64)]).unwrap();
    let st = MatchingState::new(2);
    assert!(matches!(verify_proposition1(&g, &st, 2, &OracleLimits::default()), Err(OracleError::Precondition(_))));
}

proptest! {
    #[test]
    fn any_matching_is_bounded_by_the_optimum(seed in any::<u64>(), n in 2usize..11, p in 0.1f64..0.8) {
        let mut r = rng(seed);
        let g = random_graph(n, p, 100, n, &mut r);
        let st = random_matching(&g, 0.7, &mut r);
        let opt = exact_mwm(&g, &OracleLimits { max_vertices: 20, max_edges: 60 }).unwrap();
        prop_assert!(st.total_weight() <= opt.weight);
    }
}
