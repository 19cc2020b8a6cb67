//! Candidate-over-baseline ratios, averaged across streams per τ.

use std::collections::BTreeMap;
use std::path::Path;

use svfdt_core::Algorithm;

use crate::error::{CliError, CliResult};
use crate::runner::{group, mean, tau_key, RunRecord};

#[derive(Debug, Clone, PartialEq)]
pub struct RelativeRow {
    pub candidate: Algorithm,
    pub baseline: Algorithm,
    pub tie_threshold: f64,
    pub streams: usize,
    pub accuracy: f64,
    /// Averaged over the streams where both Kappa M values exist and the
    /// baseline's is non-zero.
    pub kappa_m: Option<f64>,
    pub node_count: f64,
    pub time: f64,
}

#[derive(Debug, Clone, Copy)]
struct Means {
    accuracy: f64,
    kappa_m: Option<f64>,
    node_count: f64,
    time: f64,
}

/// Means keyed by (stream, τ bits).
type StreamMeans = BTreeMap<(String, u64), Means>;

fn per_stream(records: &[RunRecord]) -> CliResult<(Algorithm, StreamMeans)> {
    let Some(first) = records.first() else {
        return Err(CliError::config("results", "no run records"));
    };
    let algorithm = first.algorithm;
    if let Some(other) = records.iter().find(|r| r.algorithm != algorithm) {
        return Err(CliError::config(
            "results",
            format!(
                "mixed algorithms `{algorithm}` and `{}` in one result set",
                other.algorithm
            ),
        ));
    }
    let mut out = BTreeMap::new();
    for ((stream, tau), runs) in group(records, |r| (r.stream.clone(), tau_key(r.tie_threshold))) {
        let finals = || runs.iter().map(|r| &r.final_record);
        let kappas: Vec<f64> = finals().filter_map(|f| f.kappa_m).collect();
        let means = Means {
            accuracy: mean(finals().map(|f| f.accuracy)).unwrap_or(0.0),
            kappa_m: (kappas.len() == runs.len())
                .then(|| mean(kappas.iter().copied()))
                .flatten(),
            node_count: mean(finals().map(|f| f.node_count as f64)).unwrap_or(0.0),
            time: mean(finals().map(|f| f.elapsed_train_seconds)).unwrap_or(0.0),
        };
        out.insert((stream, tau), means);
    }
    Ok((algorithm, out))
}

fn ratio(candidate: f64, baseline: f64) -> f64 {
    if baseline == 0.0 && candidate == 0.0 {
        1.0
    } else {
        candidate / baseline
    }
}

/// For each τ, the mean across streams of candidate / baseline accuracy,
/// Kappa M, node count and training time. Each side holds the runs of one
/// algorithm; both must cover the same (stream, τ) pairs.
pub fn relative_metrics(
    baseline: &[RunRecord],
    candidate: &[RunRecord],
) -> CliResult<Vec<RelativeRow>> {
    let (base_alg, base) = per_stream(baseline)?;
    let (cand_alg, cand) = per_stream(candidate)?;
    let missing: Vec<String> = base
        .keys()
        .filter(|k| !cand.contains_key(*k))
        .map(|k| format!("candidate lacks ({}, τ={})", k.0, f64::from_bits(k.1)))
        .chain(
            cand.keys()
                .filter(|k| !base.contains_key(*k))
                .map(|k| format!("baseline lacks ({}, τ={})", k.0, f64::from_bits(k.1))),
        )
        .collect();
    if !missing.is_empty() {
        return Err(CliError::config(
            "results",
            format!("unmatched (stream, τ) pairs: {}", missing.join("; ")),
        ));
    }

    let mut by_tau: BTreeMap<u64, Vec<(Means, Means)>> = BTreeMap::new();
    for (key, b) in &base {
        by_tau.entry(key.1).or_default().push((*b, cand[key]));
    }
    Ok(by_tau
        .into_iter()
        .map(|(tau, pairs)| {
            let kappas: Vec<f64> = pairs
                .iter()
                .filter_map(|(b, c)| match (b.kappa_m, c.kappa_m) {
                    (Some(b), Some(c)) if b != 0.0 => Some(c / b),
                    _ => None,
                })
                .collect();
            RelativeRow {
                candidate: cand_alg,
                baseline: base_alg,
                tie_threshold: f64::from_bits(tau),
                streams: pairs.len(),
                accuracy: mean(pairs.iter().map(|(b, c)| ratio(c.accuracy, b.accuracy)))
                    .unwrap_or(0.0),
                kappa_m: mean(kappas),
                node_count: mean(pairs.iter().map(|(b, c)| ratio(c.node_count, b.node_count)))
                    .unwrap_or(0.0),
                time: mean(pairs.iter().map(|(b, c)| ratio(c.time, b.time))).unwrap_or(0.0),
            }
        })
        .collect())
}

/// Relative rows of every other algorithm in `records` against `baseline`.
pub fn relative_to(records: &[RunRecord], baseline: Algorithm) -> CliResult<Vec<RelativeRow>> {
    let base: Vec<RunRecord> = records
        .iter()
        .filter(|r| r.algorithm == baseline)
        .cloned()
        .collect();
    if base.is_empty() {
        return Err(CliError::config(
            "baseline",
            format!("no runs of `{baseline}`"),
        ));
    }
    let mut rows = Vec::new();
    for candidate in Algorithm::ALL.into_iter().filter(|a| *a != baseline) {
        let cand: Vec<RunRecord> = records
            .iter()
            .filter(|r| r.algorithm == candidate)
            .cloned()
            .collect();
        if !cand.is_empty() {
            rows.extend(relative_metrics(&base, &cand)?);
        }
    }
    Ok(rows)
}

pub const RELATIVE_HEADER: &str =
    "candidate,baseline,tie_threshold,streams,accuracy,kappa_m,node_count,time";

pub fn render_relative(rows: &[RelativeRow]) -> String {
    let mut text = String::from(RELATIVE_HEADER);
    text.push('\n');
    for r in rows {
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.candidate,
            r.baseline,
            r.tie_threshold,
            r.streams,
            r.accuracy,
            r.kappa_m.map(|k| k.to_string()).unwrap_or_default(),
            r.node_count,
            r.time
        ));
    }
    text
}

pub fn write_relative(path: &Path, rows: &[RelativeRow]) -> CliResult<()> {
    std::fs::write(path, render_relative(rows)).map_err(|e| CliError::io(path, e))
}
