//! Cycle-free random alternating paths and exact matching on a path.
//!
//! A walk keeps a per-vertex eligibility flag. A vertex becomes ineligible as
//! soon as an edge touching it joins the path, so the path never revisits a
//! vertex. Whenever the walk enters a matched vertex it immediately takes the
//! matched edge as well, which keeps every matched edge that touches the path
//! on the path. Replacing the matching on such a path by any matching of the
//! path therefore leaves the global matching feasible.

use rand::Rng;

use crate::graph::{DynamicGraph, VertexId};
use crate::matching::{MatchingError, MatchingState};
use crate::scalar::Weight;

/// Default number of neighbor draws before a walk gives up on a vertex.
pub const DEFAULT_RETRY_BUDGET: usize = 5;

/// Per-vertex eligibility, shared by successive walks and reset from the
/// visited list after each one.
#[derive(Debug, Clone)]
pub struct Eligibility {
    ineligible: Vec<bool>,
}

impl Eligibility {
    pub fn new(n: usize) -> Self {
        Eligibility {
            ineligible: vec![false; n],
        }
    }

    #[inline]
    pub fn is_eligible(&self, v: VertexId) -> bool {
        !self.ineligible[v]
    }

    #[inline]
    pub fn mark(&mut self, v: VertexId) {
        self.ineligible[v] = true;
    }

    /// Restores eligibility of every vertex in `visited`.
    pub fn reset(&mut self, visited: &[VertexId]) {
        for &v in visited {
            self.ineligible[v] = false;
        }
    }

    pub fn all_eligible(&self) -> bool {
        self.ineligible.iter().all(|&x| !x)
    }
}

/// A chained sequence of edges `e_1..e_k` given by its `k + 1` nodes.
///
/// Edge `i` joins `nodes[i]` and `nodes[i + 1]`; its weight and whether it
/// was matched when appended are stored alongside. The node list doubles as
/// the visited list used to reset eligibility.
#[derive(Debug, Clone, Default)]
pub struct WalkPath<W> {
    nodes: Vec<VertexId>,
    weights: Vec<W>,
    matched: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathEdge<W> {
    pub u: VertexId,
    pub v: VertexId,
    pub weight: W,
    pub matched: bool,
}

impl<W: Weight> WalkPath<W> {
    pub fn new() -> Self {
        WalkPath {
            nodes: Vec::new(),
            weights: Vec::new(),
            matched: Vec::new(),
        }
    }

    /// Number of edges.
    #[inline]
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    #[inline]
    pub fn nodes(&self) -> &[VertexId] {
        &self.nodes
    }

    #[inline]
    pub fn weights(&self) -> &[W] {
        &self.weights
    }

    #[inline]
    pub fn weight(&self, i: usize) -> W {
        self.weights[i]
    }

    #[inline]
    pub fn is_matched(&self, i: usize) -> bool {
        self.matched[i]
    }

    pub fn edge(&self, i: usize) -> PathEdge<W> {
        PathEdge {
            u: self.nodes[i],
            v: self.nodes[i + 1],
            weight: self.weights[i],
            matched: self.matched[i],
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = PathEdge<W>> + '_ {
        (0..self.len()).map(move |i| self.edge(i))
    }

    /// Last node of the path, where a walk continues.
    #[inline]
    pub fn last(&self) -> Option<VertexId> {
        self.nodes.last().copied()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.nodes.contains(&v)
    }

    /// Weight of the edges on the path that were matched when appended.
    pub fn matched_weight(&self) -> W {
        self.weights
            .iter()
            .zip(&self.matched)
            .filter(|(_, &m)| m)
            .map(|(&w, _)| w)
            .sum()
    }

    /// Starts the path at `start`, which becomes ineligible.
    pub fn begin(&mut self, start: VertexId, elig: &mut Eligibility) {
        debug_assert!(self.nodes.is_empty());
        self.nodes.push(start);
        elig.mark(start);
    }

    /// Appends the edge from the current last node to `v`.
    pub fn push(&mut self, v: VertexId, w: W, matched: bool, elig: &mut Eligibility) {
        debug_assert!(!self.nodes.is_empty());
        self.nodes.push(v);
        self.weights.push(w);
        self.matched.push(matched);
        elig.mark(v);
    }

    /// Resets the eligibility of every visited vertex and empties the path.
    pub fn clear(&mut self, elig: &mut Eligibility) {
        elig.reset(&self.nodes);
        self.nodes.clear();
        self.weights.clear();
        self.matched.clear();
    }
}

/// Extends `path` from its last node until it holds `max_len` edges, no
/// eligible neighbor is found within `retry_budget` draws, or a matched
/// neighbor cannot be followed across its matched edge.
///
/// The last node must be free, or matched along the path, or matched to an
/// eligible mate (in which case the matched edge is taken first).
pub fn extend_walk<W: Weight, R: Rng + ?Sized>(
    g: &DynamicGraph<W>,
    st: &MatchingState<W>,
    path: &mut WalkPath<W>,
    max_len: usize,
    retry_budget: usize,
    elig: &mut Eligibility,
    rng: &mut R,
) {
    let Some(mut cur) = path.last() else {
        return;
    };
    loop {
        if path.len() >= max_len {
            return;
        }
        if let Some(m) = st.mate(cur) {
            let k = path.len();
            let on_path = k > 0 && path.nodes[k - 1] == m && path.matched[k - 1];
            if !on_path {
                if !elig.is_eligible(m) {
                    return;
                }
                let w = st.mate_weight(cur).unwrap_or_else(W::zero);
                path.push(m, w, true, elig);
                cur = m;
                continue;
            }
        }
        let drawn = (0..retry_budget)
            .filter_map(|_| g.random_incident(cur, rng))
            .find(|&(x, _)| elig.is_eligible(x));
        let Some((next, w)) = drawn else {
            return;
        };
        match st.mate(next) {
            None => {
                path.push(next, w, false, elig);
                cur = next;
            }
            Some(m) => {
                // the matched edge at `next` must follow, otherwise the path
                // would end next to a matched edge that is not on it
                if !elig.is_eligible(m) || path.len() + 2 > max_len {
                    return;
                }
                let mw = st.mate_weight(next).unwrap_or_else(W::zero);
                path.push(next, w, false, elig);
                path.push(m, mw, true, elig);
                cur = m;
            }
        }
    }
}

/// Maximum weight matching of a path, as a selection flag per edge.
#[derive(Debug, Clone, PartialEq)]
pub struct PathMatching<W> {
    pub selected: Vec<bool>,
    pub weight: W,
}

/// Exact maximum weight matching on a chain of edges with the given weights.
///
/// `best[i]` is the optimum for the prefix `e_1..e_i`; edge `e_i` is taken
/// only when `w(e_i) + best[i-2]` is strictly larger than `best[i-1]`.
pub fn max_weight_path_matching<W: Weight>(weights: &[W]) -> PathMatching<W> {
    let k = weights.len();
    let mut best = vec![W::zero(); k + 1];
    let mut take = vec![false; k + 1];
    if k >= 1 {
        best[1] = weights[0];
        take[1] = true;
    }
    for i in 2..=k {
        let with = weights[i - 1] + best[i - 2];
        if with > best[i - 1] {
            best[i] = with;
            take[i] = true;
        } else {
            best[i] = best[i - 1];
        }
    }
    let mut selected = vec![false; k];
    let mut i = k;
    while i >= 1 {
        if take[i] {
            selected[i - 1] = true;
            i = i.saturating_sub(2);
        } else {
            i -= 1;
        }
    }
    PathMatching {
        selected,
        weight: best[k],
    }
}

pub fn mwm_on_path<W: Weight>(path: &WalkPath<W>) -> PathMatching<W> {
    max_weight_path_matching(path.weights())
}

/// Replaces the matching on `path` by its optimum if that is strictly
/// heavier than the matched edges currently on the path.
pub fn improve_along_path<W: Weight>(
    st: &mut MatchingState<W>,
    path: &WalkPath<W>,
) -> Result<bool, MatchingError> {
    if path.is_empty() {
        return Ok(false);
    }
    let best = mwm_on_path(path);
    let current = path.matched_weight();
    if best.weight > current {
        st.apply_path_matching(path, &best.selected)?;
        Ok(true)
    } else {
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Exhaustive optimum over all independent subsets of a chain.
    fn brute_force(weights: &[i64]) -> i64 {
        let k = weights.len();
        (0u32..1 << k)
            .filter(|mask| mask & (mask >> 1) == 0)
            .map(|mask| (0..k).filter(|i| mask >> i & 1 == 1).map(|i| weights[i]).sum())
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn dp_small_cases() {
        let empty = max_weight_path_matching::<i64>(&[]);
        assert_eq!(empty.weight, 0);
        assert!(empty.selected.is_empty());

        let one = max_weight_path_matching(&[7i64]);
        assert_eq!((one.selected, one.weight), (vec![true], 7));

        assert_eq!(brute_force(&[5, 3, 4]), 9);
        let a = max_weight_path_matching(&[5i64, 3, 4]);
        assert_eq!((a.selected, a.weight), (vec![true, false, true], 9));

        assert_eq!(brute_force(&[1, 5, 1]), 5);
        let b = max_weight_path_matching(&[1i64, 5, 1]);
        assert_eq!((b.selected, b.weight), (vec![false, true, false], 5));
    }

    #[test]
    fn dp_ties_prefer_skipping() {
        // 4 + 0 == 4: the second edge is not taken
        let m = max_weight_path_matching(&[4i64, 4]);
        assert_eq!(m.selected, vec![true, false]);
    }

    #[test]
    fn walk_from_isolated_vertex_is_empty() {
        let g = DynamicGraph::<i64>::new(3);
        let st = MatchingState::new(3);
        let mut elig = Eligibility::new(3);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut p = WalkPath::new();
        p.begin(0, &mut elig);
        extend_walk(&g, &st, &mut p, 5, DEFAULT_RETRY_BUDGET, &mut elig, &mut rng);
        assert!(p.is_empty());
        p.clear(&mut elig);
        assert!(elig.all_eligible());
    }

    #[test]
    fn walk_on_two_path_is_forced() {
        let g = DynamicGraph::<i64>::from_edges(3, [(0, 1, 2), (1, 2, 3)]).unwrap();
        let st = MatchingState::new(3);
        let mut elig = Eligibility::new(3);
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut p = WalkPath::new();
            p.begin(0, &mut elig);
            extend_walk(&g, &st, &mut p, 5, DEFAULT_RETRY_BUDGET, &mut elig, &mut rng);
            assert_eq!(p.nodes(), &[0, 1, 2]);
            p.clear(&mut elig);
        }
    }

    #[test]
    fn walk_on_triangle_takes_matched_edge_then_stops() {
        let g = DynamicGraph::<i64>::from_edges(3, [(0, 1, 1), (1, 2, 5), (0, 2, 1)]).unwrap();
        let mut st = MatchingState::new(3);
        st.match_edge(1, 2, 5).unwrap();
        let mut elig = Eligibility::new(3);
        let mut seen = [false; 2];
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut p = WalkPath::new();
            p.begin(0, &mut elig);
            extend_walk(&g, &st, &mut p, 10, DEFAULT_RETRY_BUDGET, &mut elig, &mut rng);
            assert_eq!(p.len(), 2);
            assert!(!p.is_matched(0) && p.is_matched(1));
            match p.nodes() {
                [0, 1, 2] => seen[0] = true,
                [0, 2, 1] => seen[1] = true,
                other => panic!("unexpected walk {other:?}"),
            }
            p.clear(&mut elig);
        }
        assert!(seen[0] && seen[1]);
    }

    #[test]
    fn walk_does_not_end_on_a_dangling_matched_vertex() {
        // 0 - 1 = 2 with budget 1: taking (0,1) would leave (1,2) off the path
        let g = DynamicGraph::<i64>::from_edges(3, [(0, 1, 1), (1, 2, 5)]).unwrap();
        let mut st = MatchingState::new(3);
        st.match_edge(1, 2, 5).unwrap();
        let mut elig = Eligibility::new(3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut p = WalkPath::new();
        p.begin(0, &mut elig);
        extend_walk(&g, &st, &mut p, 1, DEFAULT_RETRY_BUDGET, &mut elig, &mut rng);
        assert!(p.is_empty());
    }

    #[test]
    fn improve_on_chain() {
        let g = DynamicGraph::<i64>::from_edges(4, [(0, 1, 5), (1, 2, 3), (2, 3, 4)]).unwrap();
        let mut st = MatchingState::new(4);
        st.match_edge(1, 2, 3).unwrap();
        let mut elig = Eligibility::new(4);
        let mut p = WalkPath::new();
        p.begin(0, &mut elig);
        p.push(1, 5, false, &mut elig);
        p.push(2, 3, true, &mut elig);
        p.push(3, 4, false, &mut elig);
        assert_eq!(improve_along_path(&mut st, &p), Ok(true));
        assert_eq!(st.total_weight(), 9);
        st.audit(&g).unwrap();

        // rebuilt path now mirrors the optimum: no further improvement
        p.clear(&mut elig);
        p.begin(0, &mut elig);
        p.push(1, 5, true, &mut elig);
        p.push(2, 3, false, &mut elig);
        p.push(3, 4, true, &mut elig);
        let before = st.clone();
        assert_eq!(improve_along_path(&mut st, &p), Ok(false));
        assert_eq!(st, before);

        let empty = WalkPath::<i64>::new();
        assert_eq!(improve_along_path(&mut st, &empty), Ok(false));
    }
}
