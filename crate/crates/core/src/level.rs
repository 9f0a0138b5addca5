//! Weighted matching from cardinality matchings on geometric weight levels.
//!
//! Level `i` holds every edge whose normalized weight is at least
//! `(1+epsilon)^i`. Each level keeps its own graph, matching and dynamic
//! cardinality matching subroutine. The output takes the matching of the
//! highest level and adds edges of lower levels, top down, whenever both
//! endpoints are still free.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{DynamicGraph, GraphError, VertexId};
use crate::matching::MatchingState;
use crate::mcm::{DynMcm, McmConfig, McmKind};
use crate::oracle::{max_cardinality_matching, max_weight_matching, OracleLimits};
use crate::scalar::Weight;

/// Smallest epsilon accepted without an explicit override.
pub const MIN_EPSILON: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LevelError {
    #[error("epsilon must be positive and finite, got {0}")]
    Epsilon(f64),
    #[error("epsilon {0} is below {MIN_EPSILON}; the number of levels grows as 1/epsilon (override to allow)")]
    SmallEpsilon(f64),
    #[error("weight scale must be positive and finite, got {0}")]
    Scale(f64),
    #[error("normalized weight {0} is below 1")]
    BelowScale(f64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelConfig {
    pub epsilon: f64,
    pub mcm_kind: McmKind,
    pub mcm: McmConfig,
    /// Accept `epsilon` below [`MIN_EPSILON`].
    pub allow_small_epsilon: bool,
    /// Weights are divided by this before bucketing; must not exceed the
    /// smallest weight.
    pub weight_scale: f64,
}

impl Default for LevelConfig {
    fn default() -> Self {
        LevelConfig {
            epsilon: 1.0,
            mcm_kind: McmKind::Walk,
            mcm: McmConfig::default(),
            allow_small_epsilon: false,
            weight_scale: 1.0,
        }
    }
}

impl LevelConfig {
    pub fn validate(&self) -> Result<(), LevelError> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(LevelError::Epsilon(self.epsilon));
        }
        if self.epsilon < MIN_EPSILON && !self.allow_small_epsilon {
            return Err(LevelError::SmallEpsilon(self.epsilon));
        }
        if !(self.weight_scale.is_finite() && self.weight_scale > 0.0) {
            return Err(LevelError::Scale(self.weight_scale));
        }
        Ok(())
    }
}

const LEVEL_TOLERANCE: f64 = 1.0 + 1e-12;

/// Highest level containing an edge of normalized weight `w`:
/// `floor(log_{1+epsilon} w)`.
pub fn level_index(w: f64, epsilon: f64) -> Result<usize, LevelError> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(LevelError::Epsilon(epsilon));
    }
    if !(w >= 1.0) || !w.is_finite() {
        return Err(LevelError::BelowScale(w));
    }
    let base = 1.0 + epsilon;
    let mut i = (w.ln() / base.ln()).floor().max(0.0) as i32;
    // correct rounding of the logarithm at exact powers
    while base.powi(i + 1) <= w * LEVEL_TOLERANCE {
        i += 1;
    }
    while i > 0 && base.powi(i) > w * LEVEL_TOLERANCE {
        i -= 1;
    }
    Ok(i as usize)
}

/// Dynamic cardinality matching run independently on every level.
pub trait LevelMcm<W: Weight>: Sized {
    /// Fresh subroutine state for a new level over `n` vertices.
    fn spawn(&self, n: usize) -> Self;

    fn on_insert(
        &mut self,
        g: &DynamicGraph<W>,
        st: &mut MatchingState<W>,
        u: VertexId,
        v: VertexId,
        rng: &mut ChaCha8Rng,
    );

    fn on_delete(
        &mut self,
        g: &DynamicGraph<W>,
        st: &mut MatchingState<W>,
        u: VertexId,
        v: VertexId,
        rng: &mut ChaCha8Rng,
    );
}

impl<W: Weight> LevelMcm<W> for DynMcm<W> {
    fn spawn(&self, n: usize) -> Self {
        DynMcm::new(n, self.kind(), self.config().clone())
    }

    fn on_insert(&mut self, g: &DynamicGraph<W>, st: &mut MatchingState<W>, u: VertexId, v: VertexId, rng: &mut ChaCha8Rng) {
        self.handle_insert(g, st, u, v, rng);
    }

    fn on_delete(&mut self, g: &DynamicGraph<W>, st: &mut MatchingState<W>, u: VertexId, v: VertexId, rng: &mut ChaCha8Rng) {
        self.handle_delete(g, st, u, v, rng);
    }
}

/// Replaces the level matching by an exact maximum cardinality matching
/// after every update. Branch and bound within `limits`, the blossom
/// solver beyond.
#[derive(Debug, Clone, Default)]
pub struct ExactLevelMcm {
    pub limits: OracleLimits,
}

impl ExactLevelMcm {
    fn recompute<W: Weight>(&self, g: &DynamicGraph<W>, st: &mut MatchingState<W>) {
        st.clear();
        if let Ok(exact) = max_cardinality_matching(g, &self.limits) {
            for (u, v, w) in exact.edges {
                st.match_edge(u, v, w).expect("exact matching is valid");
            }
            return;
        }
        let unit: Vec<_> = g.edges().into_iter().map(|(u, v, _)| (u, v, 1i64)).collect();
        for (u, m) in max_weight_matching(g.vertex_count(), &unit).into_iter().enumerate() {
            if let Some(v) = m.filter(|&v| u < v) {
                st.match_edge(u, v, g.weight(u, v).expect("matched edge present")).expect("exact matching is valid");
            }
        }
    }
}

impl<W: Weight> LevelMcm<W> for ExactLevelMcm {
    fn spawn(&self, _n: usize) -> Self {
        self.clone()
    }

    fn on_insert(&mut self, g: &DynamicGraph<W>, st: &mut MatchingState<W>, _: VertexId, _: VertexId, _: &mut ChaCha8Rng) {
        self.recompute(g, st);
    }

    fn on_delete(&mut self, g: &DynamicGraph<W>, st: &mut MatchingState<W>, _: VertexId, _: VertexId, _: &mut ChaCha8Rng) {
        self.recompute(g, st);
    }
}

#[derive(Debug, Clone)]
pub struct Level<W, M> {
    pub graph: DynamicGraph<W>,
    pub matching: MatchingState<W>,
    pub mcm: M,
    rng: ChaCha8Rng,
}

/// The level meta-algorithm. Owns one graph per level; the caller keeps the
/// full graph.
#[derive(Debug, Clone)]
pub struct DynMwmLevel<W, M = DynMcm<W>> {
    n: usize,
    cfg: LevelConfig,
    proto: M,
    seed: u64,
    levels: Vec<Option<Level<W, M>>>,
    merged: MatchingState<W>,
    weight_range: Option<(W, W)>,
}

impl<W: Weight> DynMwmLevel<W, DynMcm<W>> {
    pub fn new(n: usize, cfg: LevelConfig, seed: u64) -> Result<Self, LevelError> {
        let proto = DynMcm::new(0, cfg.mcm_kind, cfg.mcm.clone());
        DynMwmLevel::with_mcm(n, cfg, proto, seed)
    }
}

impl<W: Weight, M: LevelMcm<W>> DynMwmLevel<W, M> {
    /// Uses `proto.spawn(n)` as the subroutine of every level.
    pub fn with_mcm(n: usize, cfg: LevelConfig, proto: M, seed: u64) -> Result<Self, LevelError> {
        cfg.validate()?;
        Ok(DynMwmLevel {
            n,
            cfg,
            proto,
            seed,
            levels: Vec::new(),
            merged: MatchingState::new(n),
            weight_range: None,
        })
    }

    pub fn config(&self) -> &LevelConfig {
        &self.cfg
    }

    /// The merged output matching.
    pub fn matching(&self) -> &MatchingState<W> {
        &self.merged
    }

    /// Number of instantiated levels (the highest index plus one).
    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, i: usize) -> Option<&Level<W, M>> {
        self.levels.get(i).and_then(|l| l.as_ref())
    }

    /// Smallest and largest weight inserted so far.
    pub fn weight_range(&self) -> Option<(W, W)> {
        self.weight_range
    }

    pub fn level_of(&self, w: W) -> Result<usize, LevelError> {
        level_index(w.as_f64() / self.cfg.weight_scale, self.cfg.epsilon)
    }

    /// Handles an insertion of `{u, v}` with weight `w`.
    pub fn handle_insert(&mut self, u: VertexId, v: VertexId, w: W) -> Result<(), LevelError> {
        let top = self.level_of(w)?;
        self.weight_range = Some(match self.weight_range {
            None => (w, w),
            Some((lo, hi)) => (if w < lo { w } else { lo }, if w > hi { w } else { hi }),
        });
        while self.levels.len() <= top {
            self.levels.push(None);
        }
        for i in (0..=top).rev() {
            let level = self.instantiate(i);
            if level.graph.insert_edge(u, v, w)? {
                level.mcm.on_insert(&level.graph, &mut level.matching, u, v, &mut level.rng);
            }
        }
        self.merge();
        Ok(())
    }

    /// Handles a deletion of `{u, v}`.
    pub fn handle_delete(&mut self, u: VertexId, v: VertexId) -> Result<(), LevelError> {
        for level in self.levels.iter_mut().rev().flatten() {
            if level.graph.delete_edge(u, v)? {
                level.mcm.on_delete(&level.graph, &mut level.matching, u, v, &mut level.rng);
            }
        }
        self.merge();
        Ok(())
    }

    fn instantiate(&mut self, i: usize) -> &mut Level<W, M> {
        let n = self.n;
        let (proto, seed) = (&self.proto, self.seed);
        self.levels[i].get_or_insert_with(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            Level {
                graph: DynamicGraph::new(n),
                matching: MatchingState::new(n),
                mcm: proto.spawn(n),
                rng,
            }
        })
    }

    /// Recomputes the output from the level matchings.
    pub fn merge(&mut self) {
        let matchings = self.levels.iter().rev().flatten().map(|l| &l.matching);
        merge_into(&mut self.merged, matchings);
    }

    /// Checks every level matching against its level graph, the output
    /// against `g`, and that each level holds as many edges as `g` has edges
    /// at or above it. Linear in the size of `g`.
    pub fn audit(&self, g: &DynamicGraph<W>) -> Result<(), String> {
        let levels = self.levels.len();
        // bucket by the same comparison `level_index` settles on
        let base = 1.0 + self.cfg.epsilon;
        let powers: Vec<f64> = (1..=levels as i32).map(|i| base.powi(i)).collect();
        let mut at_top = vec![0usize; levels];
        for u in 0..g.vertex_count() {
            for &(v, w) in g.neighbors(u).iter().filter(|&&(v, _)| u < v) {
                let x = w.as_f64() / self.cfg.weight_scale;
                if !(x >= 1.0) {
                    return Err(LevelError::BelowScale(x).to_string());
                }
                let top = powers.partition_point(|&p| p <= x * LEVEL_TOLERANCE);
                *at_top
                    .get_mut(top)
                    .ok_or_else(|| format!("edge {u}-{v} belongs to level {top} which does not exist"))? += 1;
            }
        }
        let mut expected = 0;
        for i in (0..self.levels.len()).rev() {
            expected += at_top[i];
            let l = self.level(i);
            let have = l.map_or(0, |l| l.graph.edge_count());
            if have != expected {
                return Err(format!("level {i} holds {have} edges, expected {expected}"));
            }
            if let Some(l) = l {
                l.matching.audit(&l.graph).map_err(|e| format!("level {i}: {e}"))?;
            }
        }
        self.merged.audit(g).map_err(|e| format!("merged: {e}"))
    }

    /// Full audit: rebuilds the level edge sets from `g` and compares them
    /// edge by edge, then runs [`audit`](Self::audit).
    pub fn audit_membership(&self, g: &DynamicGraph<W>) -> Result<(), String> {
        let mut expected: Vec<Vec<(VertexId, VertexId)>> = vec![Vec::new(); self.levels.len()];
        for (u, v, w) in g.edges() {
            let top = self.level_of(w).map_err(|e| e.to_string())?;
            if top >= self.levels.len() {
                return Err(format!("edge {u}-{v} belongs to level {top} which does not exist"));
            }
            for list in expected.iter_mut().take(top + 1) {
                list.push((u, v));
            }
        }
        for (i, want) in expected.iter().enumerate() {
            let have: Vec<_> = match self.level(i) {
                Some(l) => l.graph.edges().into_iter().map(|(u, v, _)| (u, v)).collect(),
                None => Vec::new(),
            };
            if &have != want {
                return Err(format!("level {i} edge set differs from the rebuilt one"));
            }
        }
        self.audit(g)
    }
}

/// Greedy merge: matchings are given from the highest level down; within a
/// level edges are taken in ascending `(min, max)` order.
pub fn merge_levels<'a, W: Weight>(
    n: usize,
    matchings: impl IntoIterator<Item = &'a MatchingState<W>>,
) -> MatchingState<W> {
    let mut out = MatchingState::new(n);
    merge_into(&mut out, matchings);
    out
}

fn merge_into<'a, W: Weight>(out: &mut MatchingState<W>, matchings: impl IntoIterator<Item = &'a MatchingState<W>>) {
    out.clear();
    for m in matchings {
        for (u, v, w) in m.matched_edges() {
            if out.is_free(u) && out.is_free(v) {
                out.match_edge(u, v, w).expect("both endpoints free");
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_index_examples() {
        assert_eq!(level_index(1.0, 1.0), Ok(0));
        assert_eq!(level_index(1.0, 0.3), Ok(0));
        assert_eq!(level_index(8.0, 1.0), Ok(3));
        assert_eq!(level_index(100.0, 1.0), Ok(6));
        assert_eq!(level_index(1.21, 0.1), Ok(2));
        assert_eq!(level_index(1.2, 0.1), Ok(1));
        assert!(matches!(level_index(0.5, 1.0), Err(LevelError::BelowScale(_))));
        assert!(level_index(3.0, 0.0).is_err());
        for k in 0..40 {
            assert_eq!(level_index(2f64.powi(k), 1.0), Ok(k as usize));
            assert_eq!(level_index(3f64.powi(k), 2.0), Ok(k as usize));
        }
    }

    #[test]
    fn small_epsilon_needs_override() {
        let cfg = LevelConfig { epsilon: 0.05, ..LevelConfig::default() };
        assert!(matches!(DynMwmLevel::<i64>::new(3, cfg.clone(), 0), Err(LevelError::SmallEpsilon(_))));
        let cfg = LevelConfig { allow_small_epsilon: true, ..cfg };
        assert!(DynMwmLevel::<i64>::new(3, cfg, 0).is_ok());
    }

    fn level_edges(alg: &DynMwmLevel<i64>, i: usize) -> Vec<(usize, usize, i64)> {
        alg.level(i).map(|l| l.graph.edges()).unwrap_or_default()
    }

    #[test]
    fn insert_light_edge_touches_only_level_zero() {
        let mut alg = DynMwmLevel::<i64>::new(4, LevelConfig::default(), 1).unwrap();
        alg.handle_insert(0, 1, 1).unwrap();
        assert_eq!(alg.level_count(), 1);
        assert_eq!(level_edges(&alg, 0), vec![(0, 1, 1)]);
        assert_eq!(alg.matching().total_weight(), 1);
    }

    #[test]
    fn insert_heavy_edge_reaches_every_lower_level() {
        let mut alg = DynMwmLevel::<i64>::new(4, LevelConfig::default(), 1).unwrap();
        alg.handle_insert(0, 1, 100).unwrap();
        assert_eq!(alg.level_count(), 7);
        for i in 0..7 {
            assert_eq!(level_edges(&alg, i), vec![(0, 1, 100)]);
        }
        alg.handle_insert(2, 3, 9).unwrap();
        for i in 0..=3 {
            assert_eq!(level_edges(&alg, i).len(), 2);
        }
        alg.handle_delete(2, 3).unwrap();
        for i in 0..7 {
            assert_eq!(level_edges(&alg, i), vec![(0, 1, 100)]);
        }
    }

    #[test]
    fn merge_examples() {
        let (a, b, c, d, e) = (0, 1, 2, 3, 4);
        let mut top = MatchingState::<i64>::new(5);
        top.match_edge(a, b, 4).unwrap();
        let mut bottom = MatchingState::<i64>::new(5);
        bottom.match_edge(b, c, 1).unwrap();
        bottom.match_edge(d, e, 1).unwrap();
        let empty = MatchingState::new(5);
        let merged = merge_levels(5, [&top, &empty, &bottom]);
        let edges: Vec<_> = merged.matched_edges().collect();
        assert_eq!(edges, vec![(a, b, 4), (d, e, 1)]);

        assert_eq!(merge_levels(5, [&bottom]), bottom);
        assert_eq!(merge_levels(5, [&bottom, &bottom, &bottom]), bottom);
    }

    #[test]
    fn merged_output_follows_the_full_graph() {
        let mut g = DynamicGraph::<i64>::new(4);
        let mut alg = DynMwmLevel::<i64>::new(4, LevelConfig::default(), 7).unwrap();
        for (u, v, w) in [(0, 1, 2), (1, 2, 50), (2, 3, 3)] {
            g.insert_edge(u, v, w).unwrap();
            alg.handle_insert(u, v, w).unwrap();
            alg.audit_membership(&g).unwrap();
        }
        assert!(alg.matching().is_matched_pair(1, 2));
        g.delete_edge(1, 2).unwrap();
        alg.handle_delete(1, 2).unwrap();
        alg.audit_membership(&g).unwrap();
        assert_eq!(alg.matching().total_weight(), 5);
    }

    #[test]
    fn exact_subroutine() {
        let mut alg = DynMwmLevel::<i64, ExactLevelMcm>::with_mcm(4, LevelConfig::default(), ExactLevelMcm::default(), 0).unwrap();
        for (u, v, w) in [(1, 2, 1), (0, 1, 1), (2, 3, 1)] {
            alg.handle_insert(u, v, w).unwrap();
        }
        assert_eq!(alg.matching().cardinality(), 2);
    }

    #[test]
    fn level_streams_are_independent_and_reproducible() {
        let run = |seed| {
            let mut alg = DynMwmLevel::<i64>::new(30, LevelConfig::default(), seed).unwrap();
            for i in 0..29 {
                alg.handle_insert(i, i + 1, 1 + (i as i64 * 7) % 20).unwrap();
            }
            alg.matching().clone()
        };
        assert_eq!(run(3), run(3));
    }
}
