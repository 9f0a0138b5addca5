//! Dynamic maximum cardinality matching used inside every weight level.
//!
//! Two augmentation strategies are available. The random walk starts at a
//! free vertex and repeatedly steals a random neighbor from its mate until it
//! meets a free vertex. The alternating breadth-first search labels vertices
//! even/odd from a free root and flips the first augmenting path it finds.
//! The search does not contract blossoms, so it is exact on bipartite graphs
//! but may miss augmenting paths that pass through odd cycles.
//!
//! Matched edges carry the weight stored in the level graph; only the
//! cardinality is optimized.

use std::collections::VecDeque;

use rand::Rng;
use thiserror::Error;

use crate::graph::{DynamicGraph, VertexId};
use crate::matching::MatchingState;
use crate::scalar::{ceil_tolerant, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum McmError {
    #[error("augmentation must start at a free vertex, {0} is matched")]
    StartMatched(VertexId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum McmKind {
    #[default]
    Walk,
    Bfs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McmConfig {
    /// Sets the augmenting path length budget `ceil(2/epsilon - 1)`.
    pub epsilon: f64,
    /// Walks tried per augmentation before giving up.
    pub repetitions: usize,
    /// Scan each visited vertex for a free neighbor before sampling.
    pub delta_settling: bool,
    /// Skip the search at a vertex until this many updates touched it.
    pub lazy_threshold: usize,
    /// On an insert between two matched vertices, look for an augmenting
    /// path through the new edge.
    pub safe_mode: bool,
    /// Limit the breadth-first search to the length budget.
    pub depth_bounded: bool,
}

impl Default for McmConfig {
    fn default() -> Self {
        McmConfig {
            epsilon: 0.1,
            repetitions: 1,
            delta_settling: true,
            lazy_threshold: 0,
            safe_mode: false,
            depth_bounded: true,
        }
    }
}

impl McmConfig {
    /// Maximum number of edges on an augmenting path.
    pub fn path_budget(&self) -> usize {
        (ceil_tolerant(2.0 / self.epsilon - 1.0).max(1.0)) as usize
    }

    /// Neighbor draws per walk. After `k` draws the walk has traced an
    /// alternating path of `2k - 1` edges.
    pub fn walk_steps(&self) -> usize {
        self.path_budget().div_ceil(2)
    }

    fn search_budget(&self) -> usize {
        if self.depth_bounded {
            self.path_budget()
        } else {
            usize::MAX
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Change<W> {
    Matched(VertexId),
    Unmatched(VertexId, VertexId, W),
}

/// Counters over the lifetime of one [`DynMcm`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct McmStats {
    pub searches: usize,
    pub augmentations: usize,
    pub skipped_lazy: usize,
}

/// Dynamic cardinality matching over one graph. The matching itself is
/// owned by the caller and passed to every handler.
#[derive(Debug, Clone)]
pub struct DynMcm<W> {
    cfg: McmConfig,
    kind: McmKind,
    journal: Vec<Change<W>>,
    touches: Vec<usize>,
    // breadth-first search scratch, reset through `visited`
    label: Vec<Label>,
    parent: Vec<VertexId>,
    depth: Vec<usize>,
    visited: Vec<VertexId>,
    queue: VecDeque<VertexId>,
    stats: McmStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Label {
    None,
    Even,
    Odd,
}

impl<W: Weight> DynMcm<W> {
    pub fn new(n: usize, kind: McmKind, cfg: McmConfig) -> Self {
        DynMcm {
            cfg,
            kind,
            journal: Vec::new(),
            touches: vec![0; n],
            label: vec![Label::None; n],
            parent: vec![usize::MAX; n],
            depth: vec![0; n],
            visited: Vec::new(),
            queue: VecDeque::new(),
            stats: McmStats::default(),
        }
    }

    pub fn config(&self) -> &McmConfig {
        &self.cfg
    }

    pub fn kind(&self) -> McmKind {
        self.kind
    }

    pub fn stats(&self) -> McmStats {
        self.stats
    }

    /// Handles an insertion already applied to `g`.
    pub fn handle_insert<R: Rng + ?Sized>(
        &mut self,
        g: &DynamicGraph<W>,
        st: &mut MatchingState<W>,
        u: VertexId,
        v: VertexId,
        rng: &mut R,
    ) {
        let w = g.weight(u, v).expect("inserted edge present in level graph");
        self.journal.clear();
        match (st.mate(u), st.mate(v)) {
            (None, None) => self.set(st, u, v, w),
            (Some(_), Some(_)) => {
                if self.cfg.safe_mode {
                    let _ = self.augment_through(g, st, u, rng) || self.augment_through(g, st, v, rng);
                }
            }
            (Some(_), None) => self.insert_one_matched(g, st, u, v, w, rng),
            (None, Some(_)) => self.insert_one_matched(g, st, v, u, w, rng),
        }
        self.journal.clear();
    }

    /// Handles a deletion already applied to `g`.
    pub fn handle_delete<R: Rng + ?Sized>(
        &mut self,
        g: &DynamicGraph<W>,
        st: &mut MatchingState<W>,
        u: VertexId,
        v: VertexId,
        rng: &mut R,
    ) {
        if st.is_matched_pair(u, v) {
            st.unmatch(u).expect("matched pair");
        }
        for x in [u, v] {
            self.touches[x] += 1;
            if !st.is_free(x) {
                continue;
            }
            if self.touches[x] < self.cfg.lazy_threshold {
                self.stats.skipped_lazy += 1;
                continue;
            }
            self.touches[x] = 0;
            self.journal.clear();
            let _ = self.augment(g, st, x, rng);
        }
        self.journal.clear();
    }

    /// Random-walk augmentation from the free vertex `start`. Every failed
    /// walk is rolled back, so a `false` result leaves `st` untouched.
    pub fn augmenting_walk<R: Rng + ?Sized>(
        &mut self,
        g: &DynamicGraph<W>,
        st: &mut MatchingState<W>,
        start: VertexId,
        rng: &mut R,
    ) -> Result<bool, McmError> {
        if !st.is_free(start) {
            return Err(McmError::StartMatched(start));
        }
        self.stats.searches += 1;
        let base = self.journal.len();
        for _ in 0..self.cfg.repetitions.max(1) {
            if self.walk_once(g, st, start, rng) {
                self.stats.augmentations += 1;
                return Ok(true);
            }
            self.undo_to(st, base);
        }
        Ok(false)
    }

    /// Alternating breadth-first search from the free vertex `start`,
    /// flipping the first augmenting path found.
    pub fn bfs_augment(
        &mut self,
        g: &DynamicGraph<W>,
        st: &mut MatchingState<W>,
        start: VertexId,
    ) -> Result<bool, McmError> {
        if !st.is_free(start) {
            return Err(McmError::StartMatched(start));
        }
        self.stats.searches += 1;
        let budget = self.cfg.search_budget();
        match self.alternating_search(g, st, start, None, budget) {
            Some(end) => {
                self.flip_from(g, st, end, start);
                self.stats.augmentations += 1;
                Ok(true)
            }
            None => Ok(false),
        }
    }

    fn augment<R: Rng + ?Sized>(
        &mut self,
        g: &DynamicGraph<W>,
        st: &mut MatchingState<W>,
        start: VertexId,
        rng: &mut R,
    ) -> bool {
        let ok = match self.kind {
            McmKind::Walk => self.augmenting_walk(g, st, start, rng),
            McmKind::Bfs => self.bfs_augment(g, st, start),
        };
        ok.expect("start is free")
    }

    // `u` matched, `v` free
    fn insert_one_matched<R: Rng + ?Sized>(
        &mut self,
        g: &DynamicGraph<W>,
        st: &mut MatchingState<W>,
        u: VertexId,
        v: VertexId,
        w: W,
        rng: &mut R,
    ) {
        match self.kind {
            McmKind::Walk => {
                let (old, _) = self.unset(st, u);
                self.set(st, u, v, w);
                if !self.augment(g, st, old, rng) {
                    self.undo_to(st, 0);
                }
            }
            McmKind::Bfs => {
                // any augmenting path through the new edge ends at `v`
                self.augment(g, st, v, rng);
            }
        }
    }

    // Both endpoints matched: find an alternating path from `u` through its
    // matched edge to a free vertex, shift the matching along it so `u`
    // becomes free, then augment from `u` with a fresh budget.
    fn augment_through<R: Rng + ?Sized>(
        &mut self,
        g: &DynamicGraph<W>,
        st: &mut MatchingState<W>,
        u: VertexId,
        rng: &mut R,
    ) -> bool {
        let Some(root) = st.mate(u) else {
            return false;
        };
        let budget = self.cfg.search_budget().saturating_sub(1);
        let Some(end) = self.alternating_search(g, st, root, Some(u), budget) else {
            return false;
        };
        self.unset(st, u);
        self.flip_from(g, st, end, root);
        if self.augment(g, st, u, rng) {
            return true;
        }
        self.undo_to(st, 0);
        false
    }

    fn walk_once<R: Rng + ?Sized>(
        &mut self,
        g: &DynamicGraph<W>,
        st: &mut MatchingState<W>,
        start: VertexId,
        rng: &mut R,
    ) -> bool {
        let mut cur = start;
        let mut prev = None;
        for _ in 0..self.cfg.walk_steps() {
            if self.cfg.delta_settling {
                if let Some(&(x, w)) = g.neighbors(cur).iter().find(|&&(x, _)| st.is_free(x)) {
                    self.set(st, cur, x, w);
                    return true;
                }
            }
            let Some((x, w)) = sample_excluding(g, cur, prev, rng) else {
                return false;
            };
            match st.mate(x) {
                None => {
                    self.set(st, cur, x, w);
                    return true;
                }
                Some(m) => {
                    self.unset(st, x);
                    self.set(st, cur, x, w);
                    prev = Some(x);
                    cur = m;
                }
            }
        }
        false
    }

    // Alternating BFS rooted at the free (or about to be freed) vertex
    // `root`. Returns the free vertex ending the first augmenting path of at
    // most `budget` edges; parents are left in `self.parent`.
    fn alternating_search(
        &mut self,
        g: &DynamicGraph<W>,
        st: &MatchingState<W>,
        root: VertexId,
        excluded: Option<VertexId>,
        budget: usize,
    ) -> Option<VertexId> {
        self.reset_labels();
        self.queue.clear();
        self.mark(root, Label::Even, usize::MAX, 0);
        if let Some(x) = excluded {
            self.mark(x, Label::Odd, usize::MAX, 0);
        }
        self.queue.push_back(root);
        while let Some(x) = self.queue.pop_front() {
            let d = self.depth[x];
            if d + 1 > budget {
                continue;
            }
            for &(y, _) in g.neighbors(x) {
                if self.label[y] != Label::None {
                    continue;
                }
                match st.mate(y) {
                    None => {
                        self.mark(y, Label::Odd, x, d + 1);
                        return Some(y);
                    }
                    Some(m) => {
                        if self.label[m] != Label::None {
                            continue;
                        }
                        self.mark(y, Label::Odd, x, d + 1);
                        self.mark(m, Label::Even, y, d + 2);
                        self.queue.push_back(m);
                    }
                }
            }
        }
        None
    }

    // Flips the alternating path traced by parent pointers from `end` back
    // to `root`. The root must be free.
    fn flip_from(&mut self, g: &DynamicGraph<W>, st: &mut MatchingState<W>, end: VertexId, root: VertexId) {
        let mut y = end;
        loop {
            let x = self.parent[y];
            let next = if x == root { None } else { Some(self.parent[x]) };
            if next.is_some() {
                self.unset(st, x);
            }
            let w = g.weight(x, y).expect("search follows graph edges");
            self.set(st, x, y, w);
            match next {
                Some(z) => y = z,
                None => break,
            }
        }
    }

    fn mark(&mut self, v: VertexId, l: Label, parent: VertexId, depth: usize) {
        self.label[v] = l;
        self.parent[v] = parent;
        self.depth[v] = depth;
        self.visited.push(v);
    }

    fn reset_labels(&mut self) {
        for &v in &self.visited {
            self.label[v] = Label::None;
        }
        self.visited.clear();
    }

    fn set(&mut self, st: &mut MatchingState<W>, u: VertexId, v: VertexId, w: W) {
        st.match_edge(u, v, w).expect("both endpoints free");
        self.journal.push(Change::Matched(u));
    }

    fn unset(&mut self, st: &mut MatchingState<W>, u: VertexId) -> (VertexId, W) {
        let (v, w) = st.unmatch(u).expect("vertex matched");
        self.journal.push(Change::Unmatched(u, v, w));
        (v, w)
    }

    fn undo_to(&mut self, st: &mut MatchingState<W>, mark: usize) {
        while self.journal.len() > mark {
            match self.journal.pop().unwrap() {
                Change::Matched(u) => {
                    st.unmatch(u).expect("journal replay");
                }
                Change::Unmatched(u, v, w) => {
                    st.match_edge(u, v, w).expect("journal replay");
                }
            }
        }
    }
}

/// Uniform neighbor of `u` other than `skip`.
fn sample_excluding<W: Weight, R: Rng + ?Sized>(
    g: &DynamicGraph<W>,
    u: VertexId,
    skip: Option<VertexId>,
    rng: &mut R,
) -> Option<(VertexId, W)> {
    let list = g.neighbors(u);
    match skip.and_then(|s| g.position(u, s)) {
        None => g.random_incident(u, rng),
        Some(_) if list.len() == 1 => None,
        Some(p) => {
            let mut i = rng.random_range(0..list.len() - 1);
            if i >= p {
                i += 1;
            }
            Some(list[i])
        }
    }
}
