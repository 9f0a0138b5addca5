//! Dynamic weighted matching by random augmenting paths.
//!
//! After each update a bounded random walk builds a cycle-free alternating
//! path anchored at the updated edge, the path is solved exactly by dynamic
//! programming, and the matching on the path is replaced when the optimum on
//! the path is heavier. The walk is repeated a configurable number of times,
//! optionally stopping after `beta` consecutive walks without improvement.

use rand::Rng;
use thiserror::Error;

use crate::graph::{DynamicGraph, VertexId};
use crate::matching::{MatchingError, MatchingState};
use crate::path::{extend_walk, improve_along_path, Eligibility, WalkPath, DEFAULT_RETRY_BUDGET};
use crate::scalar::{ceil_tolerant, Weight};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("epsilon must be positive and finite, got {0}")]
    Epsilon(f64),
    #[error("{0} must be at least 1")]
    Zero(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomConfig {
    /// Sets the walk length `ceil(2/epsilon + 3)`.
    pub epsilon: f64,
    /// Walks per update campaign.
    pub walks: usize,
    /// Stop a campaign after `beta` consecutive unsuccessful walks.
    pub stop_early: bool,
    pub beta: usize,
    /// Use `ceil(Δ^len · ln n)` walks per campaign instead of `walks`.
    pub theorem_mode: bool,
    /// Neighbor draws per step before a walk gives up.
    pub retry_budget: usize,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig {
            epsilon: 1e-3,
            walks: 10,
            stop_early: true,
            beta: 5,
            theorem_mode: false,
            retry_budget: DEFAULT_RETRY_BUDGET,
        }
    }
}

impl RandomConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(ConfigError::Epsilon(self.epsilon));
        }
        if self.walks == 0 {
            return Err(ConfigError::Zero("walks"));
        }
        if self.beta == 0 {
            return Err(ConfigError::Zero("beta"));
        }
        if self.retry_budget == 0 {
            return Err(ConfigError::Zero("retry_budget"));
        }
        Ok(())
    }

    /// Maximum number of edges on a walk, seed edges included.
    pub fn walk_length(&self) -> usize {
        ceil_tolerant(2.0 / self.epsilon + 3.0) as usize
    }

    /// Walks per campaign for a graph with `n` vertices whose maximum degree
    /// so far is `max_degree`.
    pub fn repetitions(&self, max_degree: usize, n: usize) -> usize {
        if !self.theorem_mode {
            return self.walks;
        }
        let delta = max_degree.max(1) as f64;
        let ln_n = (n.max(2) as f64).ln();
        let reps = (delta.powf(self.walk_length() as f64) * ln_n).ceil();
        // saturating float-to-int cast
        (reps as usize).max(1)
    }
}

/// Walks executed and walks that improved the matching.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CampaignOutcome {
    pub walks: usize,
    pub successes: usize,
}

impl std::ops::AddAssign for CampaignOutcome {
    fn add_assign(&mut self, rhs: Self) {
        self.walks += rhs.walks;
        self.successes += rhs.successes;
    }
}

/// Runs up to `repetitions` walks. Each walk is seeded by `seed`, extended
/// randomly to the configured length, and applied if it improves the
/// matching. The consecutive-failure counter resets on every success.
#[allow(clippy::too_many_arguments)]
pub fn run_walk_campaign<W, R, F>(
    g: &DynamicGraph<W>,
    st: &mut MatchingState<W>,
    cfg: &RandomConfig,
    repetitions: usize,
    elig: &mut Eligibility,
    path: &mut WalkPath<W>,
    mut seed: F,
    rng: &mut R,
) -> Result<CampaignOutcome, MatchingError>
where
    W: Weight,
    R: Rng + ?Sized,
    F: FnMut(&MatchingState<W>, &mut WalkPath<W>, &mut Eligibility, &mut R),
{
    let max_len = cfg.walk_length();
    let mut outcome = CampaignOutcome::default();
    let mut consecutive_failures = 0usize;
    for _ in 0..repetitions {
        seed(st, path, elig, rng);
        extend_walk(g, st, path, max_len, cfg.retry_budget, elig, rng);
        let improved = improve_along_path(st, path);
        path.clear(elig);
        outcome.walks += 1;
        if improved? {
            outcome.successes += 1;
            consecutive_failures = 0;
        } else {
            consecutive_failures += 1;
            if cfg.stop_early && consecutive_failures >= cfg.beta {
                break;
            }
        }
    }
    Ok(outcome)
}

/// Seed for a walk after inserting `{u, v}`: the new edge is always on the
/// path, flanked by the matched edges at its endpoints.
fn seed_insert<W: Weight, R: Rng + ?Sized>(
    st: &MatchingState<W>,
    path: &mut WalkPath<W>,
    elig: &mut Eligibility,
    rng: &mut R,
    (u, v, w): (VertexId, VertexId, W),
) {
    let (a, b) = if rng.random_bool(0.5) { (u, v) } else { (v, u) };
    if st.is_matched_pair(u, v) {
        path.begin(a, elig);
        path.push(b, w, true, elig);
        return;
    }
    match (st.mate(u), st.mate(v)) {
        (None, None) => {
            path.begin(a, elig);
            path.push(b, w, false, elig);
        }
        (Some(x), None) => {
            path.begin(x, elig);
            path.push(u, st.mate_weight(u).unwrap(), true, elig);
            path.push(v, w, false, elig);
        }
        (None, Some(y)) => {
            path.begin(y, elig);
            path.push(v, st.mate_weight(v).unwrap(), true, elig);
            path.push(u, w, false, elig);
        }
        (Some(x), Some(y)) => {
            path.begin(x, elig);
            path.push(u, st.mate_weight(u).unwrap(), true, elig);
            path.push(v, w, false, elig);
            path.push(y, st.mate_weight(v).unwrap(), true, elig);
        }
    }
}

/// Seed for a walk anchored at `a`: a matched anchor starts with its matched
/// edge.
fn seed_anchor<W: Weight>(
    st: &MatchingState<W>,
    path: &mut WalkPath<W>,
    elig: &mut Eligibility,
    a: VertexId,
) {
    path.begin(a, elig);
    if let Some(m) = st.mate(a) {
        path.push(m, st.mate_weight(a).unwrap(), true, elig);
    }
}

/// The random-walk dynamic weighted matching algorithm.
#[derive(Debug, Clone)]
pub struct DynMwmRandom<W> {
    cfg: RandomConfig,
    matching: MatchingState<W>,
    elig: Eligibility,
    path: WalkPath<W>,
    stats: CampaignOutcome,
}

impl<W: Weight> DynMwmRandom<W> {
    pub fn new(n: usize, cfg: RandomConfig) -> Result<Self, ConfigError> {
        cfg.validate()?;
        Ok(DynMwmRandom {
            cfg,
            matching: MatchingState::new(n),
            elig: Eligibility::new(n),
            path: WalkPath::new(),
            stats: CampaignOutcome::default(),
        })
    }

    pub fn config(&self) -> &RandomConfig {
        &self.cfg
    }

    pub fn matching(&self) -> &MatchingState<W> {
        &self.matching
    }

    /// Walks and successful walks over the lifetime of this instance.
    pub fn stats(&self) -> CampaignOutcome {
        self.stats
    }

    /// `true` when no walk is in progress (every vertex eligible).
    pub fn is_idle(&self) -> bool {
        self.elig.all_eligible() && self.path.is_empty()
    }

    /// Handles an insertion that has already been applied to `g`.
    pub fn handle_insert<R: Rng + ?Sized>(
        &mut self,
        g: &DynamicGraph<W>,
        u: VertexId,
        v: VertexId,
        w: W,
        rng: &mut R,
    ) -> Result<CampaignOutcome, MatchingError> {
        let reps = self.cfg.repetitions(g.max_degree_seen(), g.vertex_count());
        let out = run_walk_campaign(
            g,
            &mut self.matching,
            &self.cfg,
            reps,
            &mut self.elig,
            &mut self.path,
            |st, path, elig, rng| seed_insert(st, path, elig, rng, (u, v, w)),
            rng,
        )?;
        self.stats += out;
        Ok(out)
    }

    /// Handles a deletion that has already been applied to `g`. A matched
    /// edge is unmatched first; then one campaign runs anchored at `u` and
    /// one anchored at `v`, each with its own failure counter.
    pub fn handle_delete<R: Rng + ?Sized>(
        &mut self,
        g: &DynamicGraph<W>,
        u: VertexId,
        v: VertexId,
        rng: &mut R,
    ) -> Result<CampaignOutcome, MatchingError> {
        if self.matching.is_matched_pair(u, v) {
            self.matching.unmatch(u)?;
        }
        let reps = self.cfg.repetitions(g.max_degree_seen(), g.vertex_count());
        let mut total = CampaignOutcome::default();
        for anchor in [u, v] {
            total += run_walk_campaign(
                g,
                &mut self.matching,
                &self.cfg,
                reps,
                &mut self.elig,
                &mut self.path,
                |st, path, elig, _| seed_anchor(st, path, elig, anchor),
                rng,
            )?;
        }
        self.stats += total;
        Ok(total)
    }
}
