//! Result files and performance profiles.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use crate::scalar::Weight;

use super::replay::RunResult;
use super::stats::geometric_mean;
use super::HarnessError;

const HEADER: [&str; 13] = [
    "instance", "algorithm", "rep", "seed", "updates", "weight", "cardinality", "opt", "ratio",
    "total_time_s", "max_update_time_s", "attempts", "successes",
];

/// Writes one CSV row per repetition, with a header.
pub fn write_results_csv<W: Weight, Wr: Write>(out: Wr, results: &[RunResult<W>]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in results {
        w.write_record([
            r.instance.clone(),
            r.algorithm.clone(),
            r.rep.to_string(),
            r.seed.to_string(),
            r.updates.to_string(),
            r.weight.to_string(),
            r.cardinality.to_string(),
            r.opt.map(|o| o.to_string()).unwrap_or_default(),
            r.ratio().map(|x| format!("{x:.9}")).unwrap_or_default(),
            format!("{:.9}", r.total_time.as_secs_f64()),
            format!("{:.9}", r.max_update_time.as_secs_f64()),
            r.counters.attempts.to_string(),
            r.counters.successes.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Objective of one algorithm on one instance, as read back from results.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub instance: String,
    pub algorithm: String,
    pub objective: f64,
    pub opt: Option<f64>,
}

impl<W: Weight> From<&RunResult<W>> for Observation {
    fn from(r: &RunResult<W>) -> Self {
        Observation {
            instance: r.instance.clone(),
            algorithm: r.algorithm.clone(),
            objective: r.weight.as_f64(),
            opt: r.opt.map(|o| o.as_f64()),
        }
    }
}

/// Reads observations from a results CSV written by [`write_results_csv`].
pub fn read_results_csv<R: Read>(input: R) -> Result<Vec<Observation>, HarnessError> {
    let mut rd = csv::Reader::from_reader(input);
    let headers = rd.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| HarnessError::Parse { line: 1, message: format!("missing column '{name}'") })
    };
    let (ci, ca, cw, co) = (col("instance")?, col("algorithm")?, col("weight")?, col("opt")?);
    let mut out = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let num = |c: usize| -> Result<Option<f64>, HarnessError> {
            let raw = rec.get(c).unwrap_or("").trim();
            if raw.is_empty() {
                return Ok(None);
            }
            raw.parse()
                .map(Some)
                .map_err(|_| HarnessError::Parse { line, message: format!("invalid number '{raw}'") })
        };
        out.push(Observation {
            instance: rec.get(ci).unwrap_or("").to_string(),
            algorithm: rec.get(ca).unwrap_or("").to_string(),
            objective: num(cw)?.ok_or(HarnessError::Parse { line, message: "missing weight".into() })?,
            opt: num(co)?,
        });
    }
    Ok(out)
}

/// Fraction of instances on which each algorithm reaches `tau * OPT`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerfProfile {
    pub taus: Vec<f64>,
    pub algorithms: Vec<String>,
    /// `fractions[t][a]` for tau index `t` and algorithm index `a`.
    pub fractions: Vec<Vec<f64>>,
    pub instances: usize,
    pub excluded: Vec<String>,
}

/// Builds a performance profile. Repetitions of the same (instance,
/// algorithm) are combined by geometric mean. Instances without an optimum
/// are excluded with a warning; an algorithm without a result on an
/// instance counts as a miss.
pub fn perf_profile(observations: &[Observation], taus: &[f64]) -> PerfProfile {
    let mut per: BTreeMap<&str, BTreeMap<&str, Vec<f64>>> = BTreeMap::new();
    let mut opts: BTreeMap<&str, Option<f64>> = BTreeMap::new();
    for o in observations {
        per.entry(&o.instance).or_default().entry(&o.algorithm).or_default().push(o.objective);
        let slot = opts.entry(&o.instance).or_insert(None);
        if slot.is_none() {
            *slot = o.opt;
        }
    }
    let algorithms: Vec<String> = {
        let mut a: Vec<&str> = observations.iter().map(|o| o.algorithm.as_str()).collect();
        a.sort();
        a.dedup();
        a.into_iter().map(String::from).collect()
    };
    let mut excluded = Vec::new();
    let mut ratios: Vec<Vec<Option<f64>>> = Vec::new();
    for (inst, algos) in &per {
        let Some(opt) = opts[inst] else {
            log::warn!("instance '{inst}' has no optimum and is excluded from the profile");
            excluded.push(inst.to_string());
            continue;
        };
        ratios.push(
            algorithms
                .iter()
                .map(|a| {
                    algos.get(a.as_str()).and_then(|v| geometric_mean(v)).map(|obj| if opt > 0.0 { obj / opt } else { 1.0 })
                })
                .collect(),
        );
    }
    let instances = ratios.len();
    let fractions = taus
        .iter()
        .map(|&tau| {
            (0..algorithms.len())
                .map(|a| {
                    if instances == 0 {
                        return 0.0;
                    }
                    let hits = ratios.iter().filter(|r| r[a].is_some_and(|x| x >= tau - 1e-12)).count();
                    hits as f64 / instances as f64
                })
                .collect()
        })
        .collect();
    PerfProfile { taus: taus.to_vec(), algorithms, fractions, instances, excluded }
}

impl PerfProfile {
    /// Tab separated: a `tau` column followed by one column per algorithm.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("tau");
        for a in &self.algorithms {
            out.push('\t');
            out.push_str(a);
        }
        out.push('\n');
        for (t, row) in self.taus.iter().zip(&self.fractions) {
            out.push_str(&format!("{t}"));
            for f in row {
                out.push_str(&format!("\t{f}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Parses a tau grid: either `start:end:step` or a comma separated list.
/// Values must lie in (0, 1]. The grid is returned in descending order.
pub fn parse_tau_grid(spec: &str) -> Result<Vec<f64>, HarnessError> {
    let bad = |m: String| HarnessError::Config(m);
    let mut taus: Vec<f64> = if spec.contains(':') {
        let parts: Vec<f64> = spec
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad(format!("invalid tau grid '{spec}'"))))
            .collect::<Result<_, _>>()?;
        let [start, end, step] = parts[..] else {
            return Err(bad(format!("tau range '{spec}' needs start:end:step")));
        };
        if !(step > 0.0) {
            return Err(bad("tau step must be positive".into()));
        }
        let count = ((end - start) / step + 1e-9).floor() as usize;
        (0..=count).map(|i| ((start + step * i as f64) * 1e9).round() / 1e9).collect()
    } else {
        spec.split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad(format!("invalid tau '{p}'"))))
            .collect::<Result<_, _>>()?
    };
    if taus.is_empty() || taus.iter().any(|&t| !(t > 0.0 && t <= 1.0 + 1e-12)) {
        return Err(bad("tau values must lie in (0, 1]".into()));
    }
    taus.sort_by(|a, b| b.total_cmp(a));
    taus.dedup();
    Ok(taus)
}
