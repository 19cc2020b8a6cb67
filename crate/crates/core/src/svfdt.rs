//! Growth gates of the strict Hoeffding tree variants.
//!
//! Every time a leaf passes the ordinary Hoeffding split test, the leaf's
//! entropy, the merit of its best candidate and its weight are appended to
//! three running statistics. The split itself is only allowed when the leaf
//! is at least as uncertain as the other current leaves and as past
//! satisfying attempts, its best candidate is at least as informative as past
//! ones, and it has seen at least as much data as past ones did. Variant II
//! additionally lets exceptional leaves skip those gates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Constant-memory running count, mean and variance (Welford).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningStat {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningStat {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, value: f64) {
        self.count += 1;
        let delta = value - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (value - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> Option<f64> {
        (self.count > 0).then_some(self.mean)
    }

    /// Sample standard deviation; zero with a single observation.
    pub fn std_dev(&self) -> Option<f64> {
        match self.count {
            0 => None,
            1 => Some(0.0),
            n => Some((self.m2 / (n - 1) as f64).max(0.0).sqrt()),
        }
    }

    pub fn summary(&self) -> Summary {
        Summary {
            count: self.count,
            mean: self.mean().unwrap_or(0.0),
            std_dev: self.std_dev().unwrap_or(0.0),
        }
    }
}

impl FromIterator<f64> for RunningStat {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut stat = RunningStat::new();
        iter.into_iter().for_each(|v| stat.push(v));
        stat
    }
}

/// A frozen view of a [`RunningStat`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub count: u64,
    pub mean: f64,
    pub std_dev: f64,
}

impl Summary {
    pub fn is_empty(&self) -> bool {
        self.count == 0
    }
}

/// `x >= mean - σ`. Passes when nothing has been observed yet.
pub fn phi(x: f64, stat: &Summary) -> bool {
    stat.is_empty() || x >= stat.mean - stat.std_dev
}

/// `x >= mean + σ`. Fails when nothing has been observed yet.
pub fn varpi(x: f64, stat: &Summary) -> bool {
    !stat.is_empty() && x >= stat.mean + stat.std_dev
}

/// Mean and standard deviation of the entropies of the current leaves.
pub fn leaf_entropy_stats(entropies: impl IntoIterator<Item = f64>) -> Summary {
    entropies.into_iter().collect::<RunningStat>().summary()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SvfdtVariant {
    I,
    II,
}

/// How variant II combines its two skip predicates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SkipRule {
    /// Both entropy and merit must be exceptional.
    #[default]
    All,
    /// Either one suffices.
    Any,
}

pub type LeafId = u64;

/// Inputs of one split check at a leaf.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitCheck {
    pub best_merit: f64,
    /// Zero when only one candidate exists.
    pub second_merit: f64,
    pub hoeffding_bound: f64,
    pub tie_threshold: f64,
    pub leaf_entropy: f64,
    pub leaf_weight: f64,
}

impl SplitCheck {
    /// The plain Hoeffding tree condition.
    pub fn satisfies_vfdt(&self) -> bool {
        vfdt_split_condition(
            self.best_merit,
            self.second_merit,
            self.hoeffding_bound,
            self.tie_threshold,
        )
    }
}

/// Split when the best candidate leads the runner-up by more than the bound,
/// or when the bound has shrunk below the tie threshold.
pub fn vfdt_split_condition(best: f64, second: f64, bound: f64, tie_threshold: f64) -> bool {
    best - second > bound || bound < tie_threshold
}

/// History of split attempts that satisfied the Hoeffding test, plus the
/// registry of live leaves. Owned by exactly one tree.
#[derive(Debug, Clone, Default)]
pub struct GrowthStatistics {
    entropy: RunningStat,
    merit: RunningStat,
    weight: RunningStat,
    registry: BTreeMap<LeafId, usize>,
}

/// Outcome of [`GrowthStatistics::can_split`], kept for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateOutcome {
    FailedVfdt,
    Skipped,
    Passed,
    Refused,
}

impl GateOutcome {
    pub fn splits(self) -> bool {
        matches!(self, GateOutcome::Skipped | GateOutcome::Passed)
    }
}

impl GrowthStatistics {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entropy_stat(&self) -> &RunningStat {
        &self.entropy
    }

    pub fn merit_stat(&self) -> &RunningStat {
        &self.merit
    }

    pub fn weight_stat(&self) -> &RunningStat {
        &self.weight
    }

    /// Number of checks that satisfied the Hoeffding test.
    pub fn satisfied_count(&self) -> u64 {
        self.entropy.count()
    }

    /// Live leaves, keyed by leaf id, mapping to the owning node index.
    pub fn registry(&self) -> &BTreeMap<LeafId, usize> {
        &self.registry
    }

    pub fn register_leaf(&mut self, id: LeafId, node: usize) {
        self.registry.insert(id, node);
    }

    pub fn unregister_leaf(&mut self, id: LeafId) {
        self.registry.remove(&id);
    }

    /// Decides whether the leaf described by `check` may split.
    ///
    /// Statistics are summarised before the attempt is appended, and the
    /// attempt is appended before any gate is evaluated. `leaf_entropies` is
    /// called only when the Hoeffding test passes and must summarise every
    /// registered leaf, the attempting one included.
    pub fn can_split(
        &mut self,
        check: &SplitCheck,
        leaf_entropies: impl FnOnce(&BTreeMap<LeafId, usize>) -> Summary,
        variant: SvfdtVariant,
        skip: SkipRule,
    ) -> GateOutcome {
        if !check.satisfies_vfdt() {
            return GateOutcome::FailedVfdt;
        }
        let leaves = leaf_entropies(&self.registry);
        let h = self.entropy.summary();
        let ig = self.merit.summary();
        let n = self.weight.summary();

        self.entropy.push(check.leaf_entropy);
        self.merit.push(check.best_merit);
        self.weight.push(check.leaf_weight);

        if variant == SvfdtVariant::II {
            let h_skip = varpi(check.leaf_entropy, &h);
            let ig_skip = varpi(check.best_merit, &ig);
            let skip = match skip {
                SkipRule::All => h_skip && ig_skip,
                SkipRule::Any => h_skip || ig_skip,
            };
            if skip {
                return GateOutcome::Skipped;
            }
        }

        let uncertain_among_leaves = phi(check.leaf_entropy, &leaves);
        let uncertain_historically = phi(check.leaf_entropy, &h);
        let informative = phi(check.best_merit, &ig);
        let enough_data = n.is_empty() || check.leaf_weight >= n.mean;
        if uncertain_among_leaves && uncertain_historically && informative && enough_data {
            GateOutcome::Passed
        } else {
            GateOutcome::Refused
        }
    }
}
