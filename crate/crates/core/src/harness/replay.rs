//! Driving algorithms through update streams.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{DynamicGraph, VertexId};
use crate::level::{DynMwmLevel, LevelConfig, LevelMcm};
use crate::matching::MatchingState;
use crate::oracle::{blossom_mwm, exact_mwm, optimum_weight, OracleLimits};
use crate::random_walk::{DynMwmRandom, RandomConfig};
use crate::scalar::Weight;

use super::stream::{UpdateKind, UpdateStream};
use super::HarnessError;

/// Work counters reported by an algorithm.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    pub attempts: usize,
    pub successes: usize,
}

/// A dynamic matching algorithm as seen by the replay loop. Handlers are
/// called after the update has been applied to `g`.
pub trait DynamicMatcher<W: Weight> {
    fn on_insert(&mut self, g: &DynamicGraph<W>, u: VertexId, v: VertexId, w: W, rng: &mut ChaCha8Rng) -> Result<(), String>;

    fn on_delete(&mut self, g: &DynamicGraph<W>, u: VertexId, v: VertexId, rng: &mut ChaCha8Rng) -> Result<(), String>;

    /// Called once after the last update.
    fn finish(&mut self, _g: &DynamicGraph<W>) {}

    fn matching(&self) -> &MatchingState<W>;

    fn audit(&self, g: &DynamicGraph<W>) -> Result<(), String> {
        self.matching().audit(g).map_err(|e| e.to_string())
    }

    fn counters(&self) -> Counters {
        Counters::default()
    }
}

impl<W: Weight> DynamicMatcher<W> for DynMwmRandom<W> {
    fn on_insert(&mut self, g: &DynamicGraph<W>, u: VertexId, v: VertexId, w: W, rng: &mut ChaCha8Rng) -> Result<(), String> {
        self.handle_insert(g, u, v, w, rng).map(|_| ()).map_err(|e| e.to_string())
    }

    fn on_delete(&mut self, g: &DynamicGraph<W>, u: VertexId, v: VertexId, rng: &mut ChaCha8Rng) -> Result<(), String> {
        self.handle_delete(g, u, v, rng).map(|_| ()).map_err(|e| e.to_string())
    }

    fn matching(&self) -> &MatchingState<W> {
        DynMwmRandom::matching(self)
    }

    fn counters(&self) -> Counters {
        let s = self.stats();
        Counters { attempts: s.walks, successes: s.successes }
    }
}

impl<W: Weight, M: LevelMcm<W>> DynamicMatcher<W> for DynMwmLevel<W, M> {
    fn on_insert(&mut self, _: &DynamicGraph<W>, u: VertexId, v: VertexId, w: W, _: &mut ChaCha8Rng) -> Result<(), String> {
        self.handle_insert(u, v, w).map_err(|e| e.to_string())
    }

    fn on_delete(&mut self, _: &DynamicGraph<W>, u: VertexId, v: VertexId, _: &mut ChaCha8Rng) -> Result<(), String> {
        self.handle_delete(u, v).map_err(|e| e.to_string())
    }

    fn matching(&self) -> &MatchingState<W> {
        DynMwmLevel::matching(self)
    }

    fn audit(&self, g: &DynamicGraph<W>) -> Result<(), String> {
        DynMwmLevel::audit(self, g)
    }
}

/// Computes an exact maximum weight matching once, after the last update.
#[derive(Debug, Clone)]
pub struct StaticOptimum<W> {
    matching: MatchingState<W>,
    limits: OracleLimits,
}

impl<W: Weight> StaticOptimum<W> {
    pub fn new(n: usize) -> Self {
        StaticOptimum { matching: MatchingState::new(n), limits: OracleLimits::default() }
    }
}

impl<W: Weight> DynamicMatcher<W> for StaticOptimum<W> {
    fn on_insert(&mut self, _: &DynamicGraph<W>, _: VertexId, _: VertexId, _: W, _: &mut ChaCha8Rng) -> Result<(), String> {
        Ok(())
    }

    fn on_delete(&mut self, _: &DynamicGraph<W>, u: VertexId, v: VertexId, _: &mut ChaCha8Rng) -> Result<(), String> {
        if self.matching.is_matched_pair(u, v) {
            self.matching.unmatch(u).map_err(|e| e.to_string())?;
        }
        Ok(())
    }

    fn finish(&mut self, g: &DynamicGraph<W>) {
        let edges = match exact_mwm(g, &self.limits) {
            Ok(m) => m.edges,
            Err(_) => blossom_mwm(g).0,
        };
        self.matching.clear();
        for (u, v, w) in edges {
            self.matching.match_edge(u, v, w).expect("optimum is a matching");
        }
    }

    fn matching(&self) -> &MatchingState<W> {
        &self.matching
    }
}

/// Algorithm choice with its configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum Algorithm {
    Random(RandomConfig),
    Level(LevelConfig),
    Optimum,
}

impl Algorithm {
    /// Short label used in result files.
    pub fn label(&self) -> String {
        match self {
            Algorithm::Random(c) => format!(
                "random(eps={},walks={}{}{})",
                c.epsilon,
                c.walks,
                if c.stop_early { format!(",beta={}", c.beta) } else { String::new() },
                if c.theorem_mode { ",theorem" } else { "" }
            ),
            Algorithm::Level(c) => format!(
                "level-{}(eps={})",
                match c.mcm_kind {
                    crate::mcm::McmKind::Walk => "walk",
                    crate::mcm::McmKind::Bfs => "bfs",
                },
                c.epsilon
            ),
            Algorithm::Optimum => "oracle".to_string(),
        }
    }

    pub fn build<W: Weight>(&self, n: usize, seed: u64) -> Result<Box<dyn DynamicMatcher<W>>, HarnessError> {
        Ok(match self {
            Algorithm::Random(c) => {
                Box::new(DynMwmRandom::new(n, c.clone()).map_err(|e| HarnessError::Config(e.to_string()))?)
            }
            Algorithm::Level(c) => {
                Box::new(DynMwmLevel::new(n, c.clone(), seed).map_err(|e| HarnessError::Config(e.to_string()))?)
            }
            Algorithm::Optimum => Box::new(StaticOptimum::new(n)),
        })
    }
}

#[derive(Debug, Clone)]
pub struct ReplayOptions<W> {
    pub reps: usize,
    pub audit: bool,
    /// Known optimum of the final graph; computed when absent and
    /// `compute_opt` is set.
    pub opt: Option<W>,
    pub compute_opt: bool,
    pub limits: OracleLimits,
    pub instance: String,
}

impl<W> Default for ReplayOptions<W> {
    fn default() -> Self {
        ReplayOptions {
            reps: 10,
            audit: false,
            opt: None,
            compute_opt: true,
            limits: OracleLimits::default(),
            instance: String::new(),
        }
    }
}

/// Outcome of one repetition.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult<W> {
    pub instance: String,
    pub algorithm: String,
    pub rep: usize,
    pub seed: u64,
    pub updates: usize,
    pub weight: W,
    pub cardinality: usize,
    pub opt: Option<W>,
    /// Graph mutation plus handler time over all updates.
    pub total_time: Duration,
    pub max_update_time: Duration,
    pub counters: Counters,
}

impl<W: Weight> RunResult<W> {
    pub fn ratio(&self) -> Option<f64> {
        self.opt.map(|o| if o.as_f64() > 0.0 { self.weight.as_f64() / o.as_f64() } else { 1.0 })
    }
}

/// Replays `stream` once per repetition; repetition `r` uses seed
/// `seed + r` for both the algorithm and its random source.
pub fn replay<W: Weight>(
    stream: &UpdateStream<W>,
    algo: &Algorithm,
    seed: u64,
    opts: &ReplayOptions<W>,
) -> Result<Vec<RunResult<W>>, HarnessError> {
    let mut out = Vec::with_capacity(opts.reps);
    let mut opt = opts.opt;
    for rep in 0..opts.reps.max(1) {
        let rep_seed = seed.wrapping_add(rep as u64);
        let mut matcher = algo.build::<W>(stream.n, rep_seed)?;
        let (g, mut result) = replay_once(stream, matcher.as_mut(), rep_seed, opts.audit)?;
        if opt.is_none() && opts.compute_opt {
            opt = Some(optimum_weight(&g, &opts.limits));
        }
        result.instance = opts.instance.clone();
        result.algorithm = algo.label();
        result.rep = rep;
        result.opt = opt;
        out.push(result);
    }
    Ok(out)
}

/// Replays `stream` through `matcher` and returns the final graph with the
/// result of the run.
pub fn replay_once<W: Weight>(
    stream: &UpdateStream<W>,
    matcher: &mut dyn DynamicMatcher<W>,
    seed: u64,
    audit: bool,
) -> Result<(DynamicGraph<W>, RunResult<W>), HarnessError> {
    let mut g = DynamicGraph::new(stream.n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = Duration::ZERO;
    let mut max_update = Duration::ZERO;
    for op in &stream.ops {
        let invalid = |reason: String| HarnessError::InvalidOp { seq: op.seq, reason };
        let t0 = Instant::now();
        match op.kind {
            UpdateKind::Insert(w) => {
                if !g.insert_edge(op.u, op.v, w).map_err(|e| invalid(e.to_string()))? {
                    return Err(invalid("insert of a present edge".into()));
                }
                matcher.on_insert(&g, op.u, op.v, w, &mut rng).map_err(HarnessError::Algorithm)?;
            }
            UpdateKind::Delete => {
                if !g.delete_edge(op.u, op.v).map_err(|e| invalid(e.to_string()))? {
                    return Err(invalid("delete of an absent edge".into()));
                }
                matcher.on_delete(&g, op.u, op.v, &mut rng).map_err(HarnessError::Algorithm)?;
            }
        }
        let dt = t0.elapsed();
        total += dt;
        max_update = max_update.max(dt);
        if audit {
            matcher
                .audit(&g)
                .map_err(|message| HarnessError::Audit { seq: op.seq, message })?;
        }
    }
    let t0 = Instant::now();
    matcher.finish(&g);
    total += t0.elapsed();
    if audit {
        matcher.audit(&g).map_err(|message| HarnessError::Audit { seq: stream.len(), message })?;
    }
    let m = matcher.matching();
    let result = RunResult {
        instance: String::new(),
        algorithm: String::new(),
        rep: 0,
        seed,
        updates: stream.len(),
        weight: m.total_weight(),
        cardinality: m.cardinality(),
        opt: None,
        total_time: total,
        max_update_time: max_update,
        counters: matcher.counters(),
    };
    Ok((g, result))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::stream::UpdateOp;

    #[test]
    fn empty_stream() {
        let s = UpdateStream::<i64>::new(3, vec![]);
        let opts = ReplayOptions { reps: 2, ..ReplayOptions::default() };
        let r = replay(&s, &Algorithm::Random(RandomConfig::default()), 1, &opts).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!((r[0].weight, r[0].updates, r[0].opt), (0, 0, Some(0)));
    }

    #[test]
    fn single_insert() {
        let s = UpdateStream::new(2, vec![UpdateOp::insert(0, 1, 5i64)]);
        let opts = ReplayOptions { reps: 1, audit: true, ..ReplayOptions::default() };
        for algo in [
            Algorithm::Random(RandomConfig::default()),
            Algorithm::Level(LevelConfig::default()),
            Algorithm::Optimum,
        ] {
            let r = replay(&s, &algo, 1, &opts).unwrap();
            assert_eq!(r[0].weight, 5, "{}", algo.label());
            assert_eq!(r[0].ratio(), Some(1.0));
        }
    }

    #[test]
    fn invalid_stream_is_reported() {
        let s = UpdateStream::new(3, vec![UpdateOp::insert(0, 1, 5i64), UpdateOp::delete(1, 2)]);
        let err = replay(&s, &Algorithm::Optimum, 0, &ReplayOptions::default()).unwrap_err();
        assert!(matches!(err, HarnessError::InvalidOp { seq: 1, .. }));
    }
}
