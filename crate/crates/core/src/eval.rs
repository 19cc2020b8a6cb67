//! Prequential (test-then-train) evaluation.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schema::Instance;
use crate::tree::{HoeffdingTree, TreeSize};

/// Anything that predicts an instance and then learns from it.
pub trait Learner {
    /// Returns the prediction made before learning from `instance`.
    fn train_one(&mut self, instance: &Instance) -> Result<usize>;
    fn size(&self) -> TreeSize;
    fn estimated_bytes(&self) -> usize;
}

impl Learner for HoeffdingTree {
    fn train_one(&mut self, instance: &Instance) -> Result<usize> {
        HoeffdingTree::train_one(self, instance)
    }

    fn size(&self) -> TreeSize {
        HoeffdingTree::size(self)
    }

    fn estimated_bytes(&self) -> usize {
        HoeffdingTree::estimated_bytes(self)
    }
}

/// `(p0 - pm) / (1 - pm)`: accuracy `p0` relative to a majority-class
/// baseline of accuracy `pm`.
pub fn kappa_m(p0: f64, pm: f64) -> Result<f64> {
    if !(pm < 1.0) {
        return Err(Error::contract(format!(
            "baseline accuracy must be below 1, got {pm}"
        )));
    }
    Ok((p0 - pm) / (1.0 - pm))
}

/// Which majority-class baseline Kappa M is measured against.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineMode {
    /// Predict the majority class seen so far, before each update.
    #[default]
    Prequential,
    /// Share of the most frequent class over the instances seen so far.
    FullStream,
}

#[derive(Debug, Clone, Default)]
pub struct MajorityBaseline {
    counts: Vec<f64>,
    correct: f64,
    seen: f64,
}

impl MajorityBaseline {
    pub fn new(class_count: usize) -> Self {
        MajorityBaseline {
            counts: vec![0.0; class_count],
            correct: 0.0,
            seen: 0.0,
        }
    }

    pub fn observe(&mut self, label: usize, weight: f64) {
        let mut majority = 0;
        for (class, &c) in self.counts.iter().enumerate() {
            if c > self.counts[majority] {
                majority = class;
            }
        }
        if majority == label {
            self.correct += weight;
        }
        self.counts[label] += weight;
        self.seen += weight;
    }

    pub fn accuracy(&self, mode: BaselineMode) -> f64 {
        if self.seen <= 0.0 {
            return 0.0;
        }
        match mode {
            BaselineMode::Prequential => self.correct / self.seen,
            BaselineMode::FullStream => self.counts.iter().copied().fold(0.0, f64::max) / self.seen,
        }
    }
}

/// Prequential accuracy of the running-majority predictor over `labels`.
pub fn majority_baseline(labels: impl IntoIterator<Item = usize>, class_count: usize) -> f64 {
    let mut baseline = MajorityBaseline::new(class_count);
    labels.into_iter().for_each(|l| baseline.observe(l, 1.0));
    baseline.accuracy(BaselineMode::Prequential)
}

/// Metrics after a prefix of the stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub instances_seen: u64,
    pub correct: u64,
    pub accuracy: f64,
    /// Undefined while the majority baseline is perfect.
    pub kappa_m: Option<f64>,
    pub majority_accuracy: f64,
    pub node_count: usize,
    pub leaf_count: usize,
    pub depth: usize,
    /// Estimate only: see [`HoeffdingTree::estimated_bytes`].
    pub estimated_bytes: usize,
    pub elapsed_train_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub final_record: EvalRecord,
    /// Every `snapshot_every` instances, and at the end of the stream.
    pub snapshots: Vec<EvalRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub snapshot_every: u64,
    pub baseline: BaselineMode,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            snapshot_every: 10_000,
            baseline: BaselineMode::Prequential,
        }
    }
}

/// Runs `learner` over `stream`, predicting each instance before training
/// on it. Elapsed time covers only the learner's calls.
pub fn prequential_run<L, S>(
    learner: &mut L,
    stream: S,
    class_count: usize,
    options: EvalOptions,
) -> Result<RunResult>
where
    L: Learner + ?Sized,
    S: IntoIterator<Item = Instance>,
{
    if options.snapshot_every == 0 {
        return Err(Error::config("snapshot_every", "must be positive"));
    }
    let mut baseline = MajorityBaseline::new(class_count);
    let mut seen = 0u64;
    let mut correct = 0u64;
    let mut elapsed = Duration::ZERO;
    let mut snapshots = Vec::new();

    let record =
        |learner: &L, seen: u64, correct: u64, baseline: &MajorityBaseline, elapsed: Duration| {
            let accuracy = correct as f64 / seen as f64;
            let pm = baseline.accuracy(options.baseline);
            let size = learner.size();
            EvalRecord {
                instances_seen: seen,
                correct,
                accuracy,
                kappa_m: kappa_m(accuracy, pm).ok(),
                majority_accuracy: pm,
                node_count: size.nodes,
                leaf_count: size.leaves,
                depth: size.depth,
                estimated_bytes: learner.estimated_bytes(),
                elapsed_train_seconds: elapsed.as_secs_f64(),
            }
        };

    for instance in stream {
        let label = instance
            .label
            .ok_or_else(|| Error::contract("prequential evaluation needs labeled instances"))?;
        let start = Instant::now();
        let predicted = learner.train_one(&instance)?;
        elapsed += start.elapsed();
        seen += 1;
        correct += u64::from(predicted == label);
        baseline.observe(label, 1.0);
        if seen.is_multiple_of(options.snapshot_every) {
            snapshots.push(record(learner, seen, correct, &baseline, elapsed));
        }
    }
    if seen == 0 {
        return Err(Error::contract("cannot evaluate on an empty stream"));
    }
    if snapshots.last().is_none_or(|s| s.instances_seen != seen) {
        snapshots.push(record(learner, seen, correct, &baseline, elapsed));
    }
    let final_record = snapshots.last().cloned().expect("at least one snapshot");
    Ok(RunResult {
        final_record,
        snapshots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa_m(0.6, 0.6).unwrap(), 0.0);
        assert_eq!(kappa_m(1.0, 0.3).unwrap(), 1.0);
        assert!((kappa_m(0.763, 0.48812).unwrap() - 0.537).abs() < 0.001);
        assert!(kappa_m(0.2, 0.5).unwrap() < 0.0);
        assert!(kappa_m(0.9, 1.0).is_err());
    }

    #[test]
    fn kappa_increases_with_accuracy() {
        for pm in [0.0, 0.3, 0.9] {
            let mut last = f64::NEG_INFINITY;
            for i in 0..=10 {
                let k = kappa_m(i as f64 / 10.0, pm).unwrap();
                assert!(k > last);
                last = k;
            }
        }
    }

    #[test]
    fn majority_examples() {
        assert_eq!(majority_baseline([0, 1, 0, 1, 0, 1], 2), 0.5);
        assert_eq!(majority_baseline([1; 10], 2), 0.9);
        assert_eq!(majority_baseline([0; 10], 2), 1.0);
        let mut b = MajorityBaseline::new(3);
        for l in [2, 2, 1] {
            b.observe(l, 1.0);
        }
        assert!((b.accuracy(BaselineMode::FullStream) - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn balanced_stream_baseline() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let pm = majority_baseline((0..100_000).map(|_| rng.random_range(0..2usize)), 2);
        assert!((pm - 0.5).abs() <= 0.02, "{pm}");
    }
}
