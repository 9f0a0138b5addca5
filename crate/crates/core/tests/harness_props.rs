use dynmatch::harness::{
    churn_stream, gen_insertion_stream, gen_undo_suffix, geometric_mean, gnm, parse_static_edgelist,
    parse_temporal, write_static, write_temporal, ChurnSpec, StaticGraph, UpdateKind, UpdateOp, UpdateStream,
};
use proptest::prelude::*;

fn unweighted(n: usize, m: usize, seed: u64) -> StaticGraph<i64> {
    let mut g: StaticGraph<i64> = gnm(n, m, seed);
    for e in &mut g.edges {
        e.2 = None;
    }
    g
}

#[test]
fn generated_weights_are_uniform() {
    let mut counts = [0usize; 101];
    let mut total = 0;
    for seed in 0..25 {
        let s = gen_insertion_stream(&unweighted(300, 4_000, seed), seed);
        for op in &s.ops {
            let UpdateKind::Insert(w) = op.kind else { unreachable!() };
            assert!((1..=100).contains(&w));
            counts[w as usize] += 1;
            total += 1;
        }
    }
    assert_eq!(total, 100_000);
    let e = total as f64 / 100.0;
    let chi: f64 = counts[1..].iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
    // 99 degrees of freedom, critical value at 0.001
    assert!(chi < 148.23, "chi squared {chi}");
}

#[test]
fn undo_suffix_examples() {
    let ops: Vec<UpdateOp<i64>> = (0..10).map(|i| UpdateOp::insert(i, i + 1, 5)).collect();
    let s = UpdateStream::new(11, ops);
    assert_eq!(gen_undo_suffix(&s, 0.0, 1).ops, s.ops);
    let undone = gen_undo_suffix(&s, 10.0, 1);
    assert_eq!(undone.len(), 11);
    assert_eq!((undone.ops[10].u, undone.ops[10].v, undone.ops[10].kind), (9, 10, UpdateKind::Delete));
    assert_eq!(undone.ops[10].seq, 10);
    undone.validate().unwrap();

    let s = UpdateStream::new(3, vec![UpdateOp::insert(0, 1, 5i64), UpdateOp::insert(1, 2, 3), UpdateOp::delete(0, 1)]);
    let undone = gen_undo_suffix(&s, 100.0, 4);
    let kinds: Vec<_> = undone.ops[3..].iter().map(|op| (op.u, op.v, op.is_insert())).collect();
    assert_eq!(kinds, vec![(0, 1, true), (1, 2, false), (0, 1, false)]);
    undone.validate().unwrap();
    assert!(undone.final_edges().is_empty());
}

#[test]
fn parse_examples() {
    let g = parse_static_edgelist::<i64>("3\n0 1 5\n1 2 4\n").unwrap();
    assert_eq!((g.n, g.edges.clone()), (3, vec![(0, 1, Some(5)), (1, 2, Some(4))]));
    let g = parse_static_edgelist::<i64>("3\n0 1 5\n2 2 7\n1 0 9\n").unwrap();
    assert_eq!((g.edges.len(), g.self_loops, g.duplicates), (1, 1, 1));
    assert_eq!(g.edges[0], (0, 1, Some(5)));
    let err = parse_static_edgelist::<i64>("3\n0 1 5\n1 x\n").unwrap_err();
    assert!(err.to_string().starts_with("line 3"), "{err}");
}

#[test]
fn geometric_mean_matches_log_reference() {
    let mut x = 0.37f64;
    for len in 1..200 {
        let values: Vec<f64> = (0..len)
            .map(|_| {
                x = (x * 3.9 * (1.0 - x)).clamp(1e-6, 1.0 - 1e-6);
                1.0 + 1e4 * x
            })
            .collect();
        let reference = (values.iter().map(|v| v.log2()).sum::<f64>() / len as f64).exp2();
        let got = geometric_mean(&values).unwrap();
        assert!(((got - reference) / reference).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn generated_streams_replay_cleanly(
        seed in any::<u64>(),
        n in 2usize..40,
        density in 0.0f64..1.0,
        undo in 0.0f64..=100.0,
        ops in 0usize..300,
        insert_prob in 0.05f64..1.0,
    ) {
        let m = ((n * (n - 1) / 2) as f64 * density) as usize;
        let s = gen_undo_suffix(&gen_insertion_stream(&unweighted(n, m, seed), seed), undo, seed);
        prop_assert!(s.validate().is_ok());
        let left = if seed % 2 == 0 { Some(n / 2).filter(|&l| l > 0) } else { None };
        let c: UpdateStream<i64> = churn_stream(&ChurnSpec { n, ops, insert_prob, left, max_edges: None }, seed);
        prop_assert!(c.validate().is_ok());
        let c = gen_undo_suffix(&c, undo, seed);
        prop_assert!(c.validate().is_ok());
    }

    #[test]
    fn temporal_format_round_trips(seed in any::<u64>(), n in 2usize..30, ops in 0usize..200) {
        let s: UpdateStream<i64> = churn_stream(&ChurnSpec { n, ops, insert_prob: 0.6, left: None, max_edges: None }, seed);
        let (back, cleanup) = parse_temporal::<i64>(&write_temporal(&s), 0).unwrap();
        prop_assert_eq!(cleanup, Default::default());
        prop_assert_eq!(back.n, s.n);
        prop_assert_eq!(back.ops, s.ops);
    }

    #[test]
    fn static_format_round_trips(seed in any::<u64>(), n in 2usize..30, m in 0usize..40) {
        let m = m.min(n * (n - 1) / 2);
        let g: StaticGraph<i64> = gnm(n, m, seed);
        let back = parse_static_edgelist::<i64>(&write_static(&g)).unwrap();
        prop_assert_eq!(back.n, g.n);
        prop_assert_eq!(back.edges, g.edges);
    }
}
