//! Text formats.
//!
//! Static graphs: the first record is the vertex count `n`, every further
//! record is `u v [w]`. Temporal streams: one record `u v [w [ts [op]]]` per
//! update, where `op` is `+` (insert, the default) or `-`. In both formats
//! blank lines and lines starting with `%` or `#` are ignored, and fields
//! are separated by whitespace or commas.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::VertexId;
use crate::scalar::Weight;

use super::stream::{random_weight, UpdateKind, UpdateOp, UpdateStream};
use super::HarnessError;

/// A cleaned static graph: undirected, no self-loops, no parallel edges.
#[derive(Debug, Clone, PartialEq)]
pub struct StaticGraph<W> {
    pub n: usize,
    /// `(min, max, weight)` in input order; `None` for unweighted records.
    pub edges: Vec<(VertexId, VertexId, Option<W>)>,
    pub self_loops: usize,
    pub duplicates: usize,
    pub source: Option<String>,
}

impl<W> Default for StaticGraph<W> {
    fn default() -> Self {
        StaticGraph { n: 0, edges: Vec::new(), self_loops: 0, duplicates: 0, source: None }
    }
}

/// Records dropped while reading a temporal stream.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TemporalCleanup {
    pub self_loops: usize,
    pub present_inserts: usize,
    pub absent_deletes: usize,
}

fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') || t.starts_with('#') {
            return None;
        }
        let fields = t.split(|c: char| c.is_whitespace() || c == ',').filter(|f| !f.is_empty()).collect();
        Some((i + 1, fields))
    })
}

fn field<T: FromStr>(line: usize, name: &str, raw: &str) -> Result<T, HarnessError> {
    raw.parse().map_err(|_| HarnessError::Parse { line, message: format!("invalid {name} '{raw}'") })
}

fn weight_field<W: Weight>(line: usize, raw: &str) -> Result<W, HarnessError> {
    let w: W = field(line, "weight", raw)?;
    if !w.is_valid_weight() {
        return Err(HarnessError::Parse { line, message: format!("weight '{raw}' must be positive") });
    }
    Ok(w)
}

pub fn parse_static_edgelist<W: Weight>(text: &str) -> Result<StaticGraph<W>, HarnessError> {
    let mut recs = records(text);
    let (line, header) = recs.next().ok_or(HarnessError::Parse { line: 0, message: "missing vertex count".into() })?;
    if header.len() != 1 {
        return Err(HarnessError::Parse { line, message: "first record must be the vertex count".into() });
    }
    let n: usize = field(line, "vertex count", header[0])?;
    let mut g = StaticGraph { n, ..StaticGraph::default() };
    let mut seen = HashSet::new();
    for (line, f) in recs {
        if f.len() < 2 || f.len() > 3 {
            return Err(HarnessError::Parse { line, message: format!("expected 'u v [w]', got {} fields", f.len()) });
        }
        let u: VertexId = field(line, "vertex", f[0])?;
        let v: VertexId = field(line, "vertex", f[1])?;
        if u >= n || v >= n {
            return Err(HarnessError::Parse { line, message: format!("vertex out of range for n={n}") });
        }
        let w = f.get(2).map(|raw| weight_field::<W>(line, raw)).transpose()?;
        if u == v {
            g.self_loops += 1;
            continue;
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            g.duplicates += 1;
            continue;
        }
        g.edges.push((key.0, key.1, w));
    }
    Ok(g)
}

/// Reads a temporal stream. Records are ordered by timestamp (stable, so
/// records without one keep their place after the previous record), then
/// cleaned: self-loops, inserts of present edges and deletes of absent
/// edges are dropped. Missing weights are drawn from `seed`. The vertex
/// count is one more than the largest id, or the count in a `% <n> vertices`
/// comment if that is larger.
pub fn parse_temporal<W: Weight>(text: &str, seed: u64) -> Result<(UpdateStream<W>, TemporalCleanup), HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut raw: Vec<(f64, UpdateOp<W>)> = Vec::new();
    let mut n = text
        .lines()
        .filter_map(|l| l.trim().strip_prefix('%'))
        .filter_map(|l| l.split_whitespace().collect::<Vec<_>>().get(..2).and_then(|f| match f {
            [count, unit] if unit.starts_with("vertices") => count.parse::<usize>().ok(),
            _ => None,
        }))
        .max()
        .unwrap_or(0);
    let mut last_ts = f64::NEG_INFINITY;
    for (line, f) in records(text) {
        if f.len() < 2 || f.len() > 5 {
            return Err(HarnessError::Parse { line, message: format!("expected 'u v [w [ts [op]]]', got {} fields", f.len()) });
        }
        let u: VertexId = field(line, "vertex", f[0])?;
        let v: VertexId = field(line, "vertex", f[1])?;
        let w = match f.get(2) {
            Some(r) => weight_field::<W>(line, r)?,
            None => random_weight(&mut rng),
        };
        let ts = match f.get(3) {
            Some(r) => field::<f64>(line, "timestamp", r)?,
            None => last_ts,
        };
        last_ts = ts;
        let kind = match f.get(4).copied() {
            None | Some("+") => UpdateKind::Insert(w),
            Some("-") | Some("\u{2212}") => UpdateKind::Delete,
            Some(other) => return Err(HarnessError::Parse { line, message: format!("unknown operation '{other}'") }),
        };
        n = n.max(u + 1).max(v + 1);
        raw.push((ts, UpdateOp { u, v, kind, seq: line }));
    }
    raw.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut clean = TemporalCleanup::default();
    let mut present = HashSet::new();
    let mut ops = Vec::with_capacity(raw.len());
    for (_, op) in raw {
        if op.u == op.v {
            clean.self_loops += 1;
            continue;
        }
        let key = (op.u.min(op.v), op.u.max(op.v));
        match op.kind {
            UpdateKind::Insert(_) if !present.insert(key) => clean.present_inserts += 1,
            UpdateKind::Delete if !present.remove(&key) => clean.absent_deletes += 1,
            _ => ops.push(op),
        }
    }
    Ok((UpdateStream::new(n, ops), clean))
}

/// Writes a stream in the temporal format with the op index as timestamp.
pub fn write_temporal<W: Weight>(stream: &UpdateStream<W>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "% {} vertices, {} updates", stream.n, stream.len());
    for (i, op) in stream.ops.iter().enumerate() {
        let _ = match op.kind {
            UpdateKind::Insert(w) => writeln!(out, "{} {} {} {} +", op.u, op.v, w, i),
            UpdateKind::Delete => writeln!(out, "{} {} 1 {} -", op.u, op.v, i),
        };
    }
    out
}

/// Writes a static graph; edges without a weight are written without one.
pub fn write_static<W: Weight>(g: &StaticGraph<W>) -> String {
    let mut out = format!("{}\n", g.n);
    for &(u, v, w) in &g.edges {
        let _ = match w {
            Some(w) => writeln!(out, "{u} {v} {w}"),
            None => writeln!(out, "{u} {v}"),
        };
    }
    out
}
