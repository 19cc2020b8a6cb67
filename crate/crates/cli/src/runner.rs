//! Runs the (stream × τ × algorithm × seed × repetition) grid and writes the
//! per-run and aggregate result files.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use svfdt_core::eval::{prequential_run, BaselineMode, EvalOptions, EvalRecord};
use svfdt_core::streams::RNG_ALGORITHM;
use svfdt_core::{Algorithm, HoeffdingTree, TreeConfig};

use crate::config::{ExperimentConfig, StreamSpec};
use crate::error::{CliError, CliResult};

pub const RUNS_FILE: &str = "runs.jsonl";
pub const AGGREGATE_FILE: &str = "aggregate.csv";

/// One line of `runs.jsonl`: a finished run plus everything needed to
/// reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub stream: String,
    pub algorithm: Algorithm,
    pub tie_threshold: f64,
    pub seed: u64,
    pub repetition: u32,
    pub config_hash: String,
    pub rng: String,
    pub stream_config: StreamSpec,
    pub tree_config: TreeConfig,
    pub baseline: BaselineMode,
    pub snapshot_every: u64,
    pub final_record: EvalRecord,
    pub snapshots: Vec<EvalRecord>,
}

#[derive(Debug, Clone)]
struct RunSpec<'a> {
    stream: &'a StreamSpec,
    algorithm: Algorithm,
    tie_threshold: f64,
    seed: u64,
    repetition: u32,
}

fn grid(config: &ExperimentConfig) -> Vec<RunSpec<'_>> {
    let mut runs = Vec::new();
    for stream in &config.streams {
        for &tie_threshold in &config.tie_thresholds {
            for &algorithm in &config.algorithms {
                for &seed in &config.seeds {
                    for repetition in 0..config.repetitions {
                        runs.push(RunSpec {
                            stream,
                            algorithm,
                            tie_threshold,
                            seed,
                            repetition,
                        });
                    }
                }
            }
        }
    }
    runs
}

fn execute(config: &ExperimentConfig, hash: &str, spec: &RunSpec<'_>) -> CliResult<RunRecord> {
    let stream = spec.stream.open(spec.seed)?;
    let schema = stream.schema().clone();
    let class_count = schema.class_count();
    let tree_config = config.tree_config(spec.tie_threshold);
    let mut tree = HoeffdingTree::new(schema, tree_config.clone(), spec.algorithm)?;
    let options = EvalOptions {
        snapshot_every: config.snapshot_every,
        baseline: config.baseline,
    };
    let result = prequential_run(&mut tree, stream, class_count, options)?;
    Ok(RunRecord {
        stream: spec.stream.name(),
        algorithm: spec.algorithm,
        tie_threshold: spec.tie_threshold,
        seed: spec.seed,
        repetition: spec.repetition,
        config_hash: hash.to_string(),
        rng: RNG_ALGORITHM.to_string(),
        stream_config: spec.stream.clone(),
        tree_config,
        baseline: config.baseline,
        snapshot_every: config.snapshot_every,
        final_record: result.final_record,
        snapshots: result.snapshots,
    })
}

/// Runs every configured combination on `workers` threads. Records come
/// back in grid order regardless of scheduling.
pub fn run_grid(config: &ExperimentConfig, workers: usize) -> CliResult<Vec<RunRecord>> {
    config.validate()?;
    if workers < 1 {
        return Err(CliError::config("workers", "must be at least 1"));
    }
    let hash = config.hash();
    let runs = grid(config);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::config("workers", e.to_string()))?;
    pool.install(|| {
        runs.par_iter()
            .map(|spec| execute(config, &hash, spec))
            .collect()
    })
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub records: Vec<RunRecord>,
    pub runs_path: PathBuf,
    pub aggregate_path: PathBuf,
}

/// Runs the grid and writes `runs.jsonl` and `aggregate.csv` into the
/// config's output directory.
pub fn run_experiment(config: &ExperimentConfig, workers: usize) -> CliResult<ExperimentOutput> {
    let records = run_grid(config, workers)?;
    let dir = &config.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let runs_path = dir.join(RUNS_FILE);
    write_runs(&runs_path, &records)?;
    let aggregate_path = dir.join(AGGREGATE_FILE);
    write_aggregate(&aggregate_path, &aggregate(&records))?;
    Ok(ExperimentOutput {
        records,
        runs_path,
        aggregate_path,
    })
}

pub fn write_runs(path: &Path, records: &[RunRecord]) -> CliResult<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut out = BufWriter::new(file);
    for record in records {
        serde_json::to_writer(&mut out, record).map_err(|e| CliError::io(path, e))?;
        out.write_all(b"\n").map_err(|e| CliError::io(path, e))?;
    }
    out.flush().map_err(|e| CliError::io(path, e))
}

/// Reads `runs.jsonl`, or the file of that name inside a directory.
pub fn read_runs(path: &Path) -> CliResult<Vec<RunRecord>> {
    let path = if path.is_dir() {
        path.join(RUNS_FILE)
    } else {
        path.to_path_buf()
    };
    let file = File::open(&path).map_err(|e| CliError::io(&path, e))?;
    let mut records = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| CliError::io(&path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line)
            .map_err(|e| CliError::io(&path, format!("line {}: {e}", i + 1)))?;
        records.push(record);
    }
    Ok(records)
}

/// Means over seeds and repetitions for one (stream, algorithm, τ).
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub stream: String,
    pub algorithm: Algorithm,
    pub tie_threshold: f64,
    pub runs: usize,
    pub accuracy: f64,
    /// Mean over the runs where it is defined.
    pub kappa_m: Option<f64>,
    pub node_count: f64,
    pub leaf_count: f64,
    pub depth: f64,
    pub estimated_bytes: f64,
    pub time_mean: f64,
    /// Sample standard deviation; 0 for a single run.
    pub time_std: f64,
}

pub(crate) fn mean(xs: impl IntoIterator<Item = f64>) -> Option<f64> {
    let (sum, n) = xs
        .into_iter()
        .fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| sum / n as f64)
}

fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs.iter().copied()).unwrap_or(0.0);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Groups records by `key`, keeping first-seen order.
pub(crate) fn group<K: Ord + Clone>(
    records: &[RunRecord],
    key: impl Fn(&RunRecord) -> K,
) -> Vec<(K, Vec<&RunRecord>)> {
    let mut order = Vec::new();
    let mut groups: BTreeMap<K, Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        let k = key(r);
        if !groups.contains_key(&k) {
            order.push(k.clone());
        }
        groups.entry(k).or_default().push(r);
    }
    order
        .into_iter()
        .map(|k| {
            let g = groups.remove(&k).expect("grouped");
            (k, g)
        })
        .collect()
}

/// τ as an orderable key (τ is validated finite and non-negative).
pub(crate) fn tau_key(tau: f64) -> u64 {
    tau.to_bits()
}

pub fn aggregate(records: &[RunRecord]) -> Vec<AggregateRow> {
    group(records, |r| {
        (r.stream.clone(), r.algorithm, tau_key(r.tie_threshold))
    })
    .into_iter()
    .map(|((stream, algorithm, _), runs)| {
        let finals: Vec<&EvalRecord> = runs.iter().map(|r| &r.final_record).collect();
        let times: Vec<f64> = finals.iter().map(|f| f.elapsed_train_seconds).collect();
        AggregateRow {
            stream,
            algorithm,
            tie_threshold: runs[0].tie_threshold,
            runs: runs.len(),
            accuracy: mean(finals.iter().map(|f| f.accuracy)).unwrap_or(0.0),
            kappa_m: mean(finals.iter().filter_map(|f| f.kappa_m)),
            node_count: mean(finals.iter().map(|f| f.node_count as f64)).unwrap_or(0.0),
            leaf_count: mean(finals.iter().map(|f| f.leaf_count as f64)).unwrap_or(0.0),
            depth: mean(finals.iter().map(|f| f.depth as f64)).unwrap_or(0.0),
            estimated_bytes: mean(finals.iter().map(|f| f.estimated_bytes as f64)).unwrap_or(0.0),
            time_mean: mean(times.iter().copied()).unwrap_or(0.0),
            time_std: sample_std(&times),
        }
    })
    .collect()
}

pub const AGGREGATE_HEADER: &str =
    "stream,algorithm,tie_threshold,runs,accuracy,kappa_m,node_count,leaf_count,depth,estimated_bytes,time_mean,time_std";

pub fn write_aggregate(path: &Path, rows: &[AggregateRow]) -> CliResult<()> {
    let mut text = String::from(AGGREGATE_HEADER);
    text.push('\n');
    for r in rows {
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.stream,
            r.algorithm,
            r.tie_threshold,
            r.runs,
            r.accuracy,
            r.kappa_m.map(|k| k.to_string()).unwrap_or_default(),
            r.node_count,
            r.leaf_count,
            r.depth,
            r.estimated_bytes,
            r.time_mean,
            r.time_std
        ));
    }
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}
