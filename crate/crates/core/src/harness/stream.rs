//! Update streams and the generators that derive them from static graphs.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::VertexId;
use crate::scalar::Weight;

use super::io::StaticGraph;
use super::HarnessError;

/// Smallest and largest generated weight.
pub const GENERATED_WEIGHTS: (i64, i64) = (1, 100);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UpdateKind<W> {
    Insert(W),
    Delete,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpdateOp<W> {
    pub u: VertexId,
    pub v: VertexId,
    pub kind: UpdateKind<W>,
    pub seq: usize,
}

impl<W: Weight> UpdateOp<W> {
    pub fn insert(u: VertexId, v: VertexId, w: W) -> Self {
        UpdateOp { u, v, kind: UpdateKind::Insert(w), seq: 0 }
    }

    pub fn delete(u: VertexId, v: VertexId) -> Self {
        UpdateOp { u, v, kind: UpdateKind::Delete, seq: 0 }
    }

    pub fn is_insert(&self) -> bool {
        matches!(self.kind, UpdateKind::Insert(_))
    }
}

/// Where a stream came from, recorded alongside results.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Provenance {
    pub source: Option<String>,
    pub seed: Option<u64>,
    pub undo_percent: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UpdateStream<W> {
    pub n: usize,
    pub ops: Vec<UpdateOp<W>>,
    pub provenance: Provenance,
}

impl<W: Weight> UpdateStream<W> {
    pub fn new(n: usize, ops: Vec<UpdateOp<W>>) -> Self {
        let mut s = UpdateStream { n, ops, provenance: Provenance::default() };
        s.renumber();
        s
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    fn renumber(&mut self) {
        for (i, op) in self.ops.iter_mut().enumerate() {
            op.seq = i;
        }
    }

    /// Checks that replaying on an empty graph never inserts a present edge,
    /// deletes an absent one, or uses an invalid vertex or weight.
    pub fn validate(&self) -> Result<(), HarnessError> {
        let mut present = HashSet::new();
        for op in &self.ops {
            let bad = |reason: &str| HarnessError::InvalidOp { seq: op.seq, reason: reason.to_string() };
            if op.u >= self.n || op.v >= self.n {
                return Err(bad("vertex out of range"));
            }
            if op.u == op.v {
                return Err(bad("self-loop"));
            }
            let key = (op.u.min(op.v), op.u.max(op.v));
            match op.kind {
                UpdateKind::Insert(w) => {
                    if !w.is_valid_weight() {
                        return Err(bad("weight must be positive"));
                    }
                    if !present.insert(key) {
                        return Err(bad("insert of a present edge"));
                    }
                }
                UpdateKind::Delete => {
                    if !present.remove(&key) {
                        return Err(bad("delete of an absent edge"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Edges present after the whole stream, as sorted `(min, max, w)`.
    pub fn final_edges(&self) -> Vec<(VertexId, VertexId, W)> {
        let mut present: std::collections::BTreeMap<(VertexId, VertexId), W> = Default::default();
        for op in &self.ops {
            let key = (op.u.min(op.v), op.u.max(op.v));
            match op.kind {
                UpdateKind::Insert(w) => {
                    present.insert(key, w);
                }
                UpdateKind::Delete => {
                    present.remove(&key);
                }
            }
        }
        present.into_iter().map(|((u, v), w)| (u, v, w)).collect()
    }
}

/// Uniform integer weight in the generated range.
pub fn random_weight<W: Weight, R: Rng + ?Sized>(rng: &mut R) -> W {
    let (lo, hi) = GENERATED_WEIGHTS;
    W::from_i64(rng.random_range(lo..=hi)).expect("generated weight fits")
}

/// Inserts every edge of `graph` in a uniformly random order. Edges without
/// a weight get one uniform in the generated range.
pub fn gen_insertion_stream<W: Weight>(graph: &StaticGraph<W>, seed: u64) -> UpdateStream<W> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = graph.edges.clone();
    edges.shuffle(&mut rng);
    let ops = edges
        .into_iter()
        .map(|(u, v, w)| UpdateOp::insert(u, v, w.unwrap_or_else(|| random_weight(&mut rng))))
        .collect();
    let mut s = UpdateStream::new(graph.n, ops);
    s.provenance = Provenance { source: graph.source.clone(), seed: Some(seed), undo_percent: 0.0 };
    s
}

/// Appends the inverse of the last `x_percent` of operations in reverse
/// order. Reinserted edges get a fresh random weight.
pub fn gen_undo_suffix<W: Weight>(stream: &UpdateStream<W>, x_percent: f64, seed: u64) -> UpdateStream<W> {
    assert!((0.0..=100.0).contains(&x_percent), "undo percentage outside [0, 100]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = ((stream.len() as f64) * x_percent / 100.0 + 1e-9).floor() as usize;
    let mut ops = stream.ops.clone();
    for op in stream.ops[stream.len() - count..].iter().rev() {
        ops.push(match op.kind {
            UpdateKind::Insert(_) => UpdateOp::delete(op.u, op.v),
            UpdateKind::Delete => UpdateOp::insert(op.u, op.v, random_weight(&mut rng)),
        });
    }
    let mut s = UpdateStream::new(stream.n, ops);
    s.provenance = Provenance { undo_percent: x_percent, ..stream.provenance.clone() };
    s
}
