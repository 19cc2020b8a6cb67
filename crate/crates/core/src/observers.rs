//! Per-leaf sufficient statistics for each attribute, and the split
//! candidates they produce.
//!
//! Nominal attributes keep a class-by-value weight table and propose a
//! multiway split. Numeric attributes keep one Gaussian per class and propose
//! the best of `bins` equally spaced thresholds between the smallest and the
//! largest value seen, estimating how much of each class falls on either side
//! from its normal CDF.

use std::mem::size_of;

use crate::dist::ClassDistribution;
use crate::error::{Error, Result};
use crate::schema::AttributeKind;
use crate::stats::gain_unchecked;

/// Candidates that leave less than this share of the weight in all but one
/// branch are discarded.
pub const MIN_BRANCH_FRACTION: f64 = 0.01;

pub const DEFAULT_BINS: usize = 100;

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// Weighted running mean and variance of one class's values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GaussianEstimator {
    weight: f64,
    mean: f64,
    m2: f64,
}

impl GaussianEstimator {
    pub fn add(&mut self, value: f64, weight: f64) {
        if self.weight > 0.0 {
            self.weight += weight;
            let delta = value - self.mean;
            self.mean += weight * delta / self.weight;
            self.m2 += weight * delta * (value - self.mean);
        } else {
            self.mean = value;
            self.weight = weight;
        }
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased variance; zero until more than one unit of weight is seen.
    pub fn variance(&self) -> f64 {
        if self.weight > 1.0 {
            (self.m2 / (self.weight - 1.0)).max(0.0)
        } else {
            0.0
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    pub fn density(&self, value: f64) -> f64 {
        if self.weight <= 0.0 {
            return 0.0;
        }
        let sd = self.std_dev();
        if sd > 0.0 {
            let z = (value - self.mean) / sd;
            (-0.5 * z * z).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt())
        } else if (value - self.mean).abs() <= 1e-9 {
            1.0
        } else {
            0.0
        }
    }
}

/// How a split node routes instances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplitTest {
    /// Values `<= threshold` go to branch 0, the rest to branch 1.
    Threshold(f64),
    /// One branch per nominal value.
    Multiway { arity: usize },
}

impl SplitTest {
    pub fn branch_count(&self) -> usize {
        match *self {
            SplitTest::Threshold(_) => 2,
            SplitTest::Multiway { arity } => arity,
        }
    }

    #[inline]
    pub fn branch(&self, value: f64) -> usize {
        match *self {
            SplitTest::Threshold(t) => usize::from(value > t),
            SplitTest::Multiway { arity } => (value as usize).min(arity - 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitCandidate {
    pub attribute: usize,
    pub test: SplitTest,
    /// Information gain in bits.
    pub merit: f64,
    pub post_split: Vec<ClassDistribution>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NominalObserver {
    arity: usize,
    class_count: usize,
    /// Row-major `[class][value]`.
    counts: Vec<f64>,
    class_totals: Vec<f64>,
}

impl NominalObserver {
    pub fn new(class_count: usize, arity: usize) -> Self {
        NominalObserver {
            arity,
            class_count,
            counts: vec![0.0; class_count * arity],
            class_totals: vec![0.0; class_count],
        }
    }

    pub fn observe(&mut self, value: usize, class: usize, weight: f64) -> Result<()> {
        if value >= self.arity {
            return Err(Error::contract(format!(
                "nominal value {value} outside 0..{}",
                self.arity
            )));
        }
        if class >= self.class_count {
            return Err(Error::contract(format!(
                "class {class} outside 0..{}",
                self.class_count
            )));
        }
        self.counts[class * self.arity + value] += weight;
        self.class_totals[class] += weight;
        Ok(())
    }

    pub fn count(&self, class: usize, value: usize) -> f64 {
        self.counts[class * self.arity + value]
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Laplace-smoothed `P(value | class)`.
    pub fn likelihood(&self, value: usize, class: usize) -> f64 {
        (self.count(class, value.min(self.arity - 1)) + 1.0)
            / (self.class_totals[class] + self.arity as f64)
    }

    pub fn best_split(&self, attribute: usize, pre: &ClassDistribution) -> Option<SplitCandidate> {
        if self.class_totals.iter().sum::<f64>() <= 0.0 {
            return None;
        }
        let post_split = scaled_partition(pre, self.arity, |class, out| {
            let total = self.class_totals[class];
            if total <= 0.0 {
                return false;
            }
            for (value, slot) in out.iter_mut().enumerate() {
                *slot = self.count(class, value) / total;
            }
            true
        });
        candidate(
            attribute,
            SplitTest::Multiway { arity: self.arity },
            pre,
            post_split,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianObserver {
    bins: usize,
    per_class: Vec<GaussianEstimator>,
    class_min: Vec<f64>,
    class_max: Vec<f64>,
}

impl GaussianObserver {
    pub fn new(class_count: usize, bins: usize) -> Self {
        GaussianObserver {
            bins: bins.max(1),
            per_class: vec![GaussianEstimator::default(); class_count],
            class_min: vec![f64::INFINITY; class_count],
            class_max: vec![f64::NEG_INFINITY; class_count],
        }
    }

    pub fn observe(&mut self, value: f64, class: usize, weight: f64) -> Result<()> {
        if class >= self.per_class.len() {
            return Err(Error::contract(format!(
                "class {class} outside 0..{}",
                self.per_class.len()
            )));
        }
        if !value.is_finite() {
            return Err(Error::contract("numeric value must be finite"));
        }
        self.per_class[class].add(value, weight);
        self.class_min[class] = self.class_min[class].min(value);
        self.class_max[class] = self.class_max[class].max(value);
        Ok(())
    }

    pub fn estimator(&self, class: usize) -> &GaussianEstimator {
        &self.per_class[class]
    }

    /// Smallest and largest value seen across all classes.
    pub fn range(&self) -> Option<(f64, f64)> {
        let min = self.class_min.iter().copied().fold(f64::INFINITY, f64::min);
        let max = self
            .class_max
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        (min <= max).then_some((min, max))
    }

    pub fn likelihood(&self, value: f64, class: usize) -> f64 {
        self.per_class[class].density(value)
    }

    /// The `bins` thresholds strictly inside the observed range.
    pub fn candidate_thresholds(&self) -> Vec<f64> {
        match self.range() {
            Some((min, max)) if min < max => {
                let step = (max - min) / (self.bins + 1) as f64;
                (1..=self.bins).map(|i| min + step * i as f64).collect()
            }
            _ => Vec::new(),
        }
    }

    /// Share of `class` estimated to fall at or below `threshold`, or `None`
    /// when the class has not been observed.
    pub fn fraction_at_or_below(&self, class: usize, threshold: f64) -> Option<f64> {
        let est = &self.per_class[class];
        if est.weight() <= 0.0 {
            return None;
        }
        if threshold < self.class_min[class] {
            return Some(0.0);
        }
        if threshold >= self.class_max[class] {
            return Some(1.0);
        }
        let sd = est.std_dev();
        Some(if sd > 0.0 {
            normal_cdf((threshold - est.mean()) / sd)
        } else if threshold >= est.mean() {
            1.0
        } else {
            0.0
        })
    }

    /// Branch distributions for a binary split at `threshold`.
    pub fn partition_at(&self, threshold: f64, pre: &ClassDistribution) -> Vec<ClassDistribution> {
        scaled_partition(pre, 2, |class, out| {
            match self.fraction_at_or_below(class, threshold) {
                Some(below) => {
                    out[0] = below;
                    out[1] = 1.0 - below;
                    true
                }
                None => false,
            }
        })
    }

    /// Candidate for a single threshold, if it passes the branch-share rule.
    pub fn evaluate_threshold(
        &self,
        attribute: usize,
        threshold: f64,
        pre: &ClassDistribution,
    ) -> Option<SplitCandidate> {
        candidate(
            attribute,
            SplitTest::Threshold(threshold),
            pre,
            self.partition_at(threshold, pre),
        )
    }

    pub fn best_split(&self, attribute: usize, pre: &ClassDistribution) -> Option<SplitCandidate> {
        let mut best: Option<SplitCandidate> = None;
        for threshold in self.candidate_thresholds() {
            if let Some(c) = self.evaluate_threshold(attribute, threshold, pre) {
                if best.as_ref().is_none_or(|b| c.merit > b.merit) {
                    best = Some(c);
                }
            }
        }
        best
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AttributeObserver {
    Nominal(NominalObserver),
    Numeric(GaussianObserver),
}

impl AttributeObserver {
    pub fn for_kind(kind: &AttributeKind, class_count: usize, bins: usize) -> Self {
        match *kind {
            AttributeKind::Nominal { arity } => {
                AttributeObserver::Nominal(NominalObserver::new(class_count, arity))
            }
            AttributeKind::Numeric => {
                AttributeObserver::Numeric(GaussianObserver::new(class_count, bins))
            }
        }
    }

    pub fn observe(&mut self, value: f64, class: usize, weight: f64) -> Result<()> {
        match self {
            AttributeObserver::Nominal(o) => {
                if value < 0.0 || value.fract() != 0.0 {
                    return Err(Error::contract(format!("{value} is not a nominal index")));
                }
                o.observe(value as usize, class, weight)
            }
            AttributeObserver::Numeric(o) => o.observe(value, class, weight),
        }
    }

    pub fn best_split(&self, attribute: usize, pre: &ClassDistribution) -> Option<SplitCandidate> {
        match self {
            AttributeObserver::Nominal(o) => o.best_split(attribute, pre),
            AttributeObserver::Numeric(o) => o.best_split(attribute, pre),
        }
    }

    pub fn likelihood(&self, value: f64, class: usize) -> f64 {
        match self {
            AttributeObserver::Nominal(o) => o.likelihood(value as usize, class),
            AttributeObserver::Numeric(o) => o.likelihood(value, class),
        }
    }

    /// Rough heap footprint in bytes.
    pub fn estimated_bytes(&self) -> usize {
        size_of::<Self>()
            + match self {
                AttributeObserver::Nominal(o) => {
                    (o.counts.len() + o.class_totals.len()) * size_of::<f64>()
                }
                AttributeObserver::Numeric(o) => {
                    o.per_class.len() * (size_of::<GaussianEstimator>() + 2 * size_of::<f64>())
                }
            }
    }
}

/// Splits each class of `pre` across `branches` in the proportions the
/// observer reports for it. `fractions(class, out)` fills `out` and returns
/// false for classes the observer has not seen; those are spread in the
/// proportions of everything the observer has seen, so every class of `pre`
/// is fully accounted for across the branches.
#[allow(clippy::needless_range_loop)] // `class` indexes the inner dimension
fn scaled_partition(
    pre: &ClassDistribution,
    branches: usize,
    mut fractions: impl FnMut(usize, &mut [f64]) -> bool,
) -> Vec<ClassDistribution> {
    let classes = pre.class_count();
    let mut weights = vec![vec![0.0; classes]; branches];
    let mut frac = vec![0.0; branches];
    let mut pooled = vec![0.0; branches];
    let mut unseen = Vec::new();
    for class in 0..classes {
        if fractions(class, &mut frac) {
            let w = pre.weight(class);
            for (k, f) in frac.iter().enumerate() {
                weights[k][class] = w * f;
                pooled[k] += w * f;
            }
        } else if pre.weight(class) > 0.0 {
            unseen.push(class);
        }
    }
    if !unseen.is_empty() {
        let pooled_total: f64 = pooled.iter().sum();
        for class in unseen {
            let w = pre.weight(class);
            for k in 0..branches {
                weights[k][class] = if pooled_total > 0.0 {
                    w * pooled[k] / pooled_total
                } else {
                    w / branches as f64
                };
            }
        }
    }
    weights
        .into_iter()
        .map(ClassDistribution::from_weights)
        .collect()
}

fn candidate(
    attribute: usize,
    test: SplitTest,
    pre: &ClassDistribution,
    post_split: Vec<ClassDistribution>,
) -> Option<SplitCandidate> {
    let total: f64 = post_split.iter().map(ClassDistribution::total).sum();
    if total <= 0.0 {
        return None;
    }
    let substantial = post_split
        .iter()
        .filter(|b| b.total() > MIN_BRANCH_FRACTION * total)
        .count();
    if substantial < 2 {
        return None;
    }
    Some(SplitCandidate {
        attribute,
        test,
        merit: gain_unchecked(pre, &post_split),
        post_split,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::entropy;
    use proptest::prelude::*;

    fn check_conservation(pre: &ClassDistribution, c: &SplitCandidate) {
        for class in 0..pre.class_count() {
            let sum: f64 = c.post_split.iter().map(|b| b.weight(class)).sum();
            let w = pre.weight(class);
            assert!(
                (sum - w).abs() <= 1e-6 * w.max(1.0),
                "class {class}: {sum} vs {w}"
            );
        }
    }

    #[test]
    fn nominal_counts() {
        let mut o = NominalObserver::new(2, 3);
        o.observe(1, 0, 1.0).unwrap();
        o.observe(1, 0, 1.0).unwrap();
        assert_eq!(o.count(0, 1), 2.0);
        assert!(o.observe(3, 0, 1.0).is_err());
    }

    #[test]
    fn nominal_perfect_separation() {
        let mut o = NominalObserver::new(2, 2);
        for _ in 0..5 {
            o.observe(0, 0, 1.0).unwrap();
            o.observe(1, 1, 1.0).unwrap();
        }
        let pre = ClassDistribution::from_weights(vec![5.0, 5.0]);
        let c = o.best_split(4, &pre).unwrap();
        assert_eq!(c.attribute, 4);
        assert_eq!(c.test, SplitTest::Multiway { arity: 2 });
        assert!((c.merit - 1.0).abs() < 1e-12);
        assert_eq!(c.post_split[0].weights(), &[5.0, 0.0]);
        assert_eq!(c.post_split[1].weights(), &[0.0, 5.0]);
    }

    #[test]
    fn nominal_single_value_is_no_candidate() {
        let mut o = NominalObserver::new(2, 3);
        o.observe(2, 0, 3.0).unwrap();
        o.observe(2, 1, 3.0).unwrap();
        assert!(o
            .best_split(0, &ClassDistribution::from_weights(vec![3.0, 3.0]))
            .is_none());
    }

    #[test]
    fn gaussian_moments() {
        let mut o = GaussianObserver::new(2, 10);
        for v in [1.0, 2.0, 3.0, 4.0, 5.0] {
            o.observe(v, 0, 1.0).unwrap();
        }
        assert_eq!(o.estimator(0).mean(), 3.0);
        assert!((o.estimator(0).variance() - 2.5).abs() < 1e-12);
        assert_eq!(o.estimator(1).weight(), 0.0);
        assert_eq!(o.estimator(1).variance(), 0.0);
        assert_eq!(o.range(), Some((1.0, 5.0)));
    }

    #[test]
    fn unseen_class_gets_no_weight() {
        let mut o = GaussianObserver::new(3, 10);
        for v in [1.0, 2.0, 3.0] {
            o.observe(v, 0, 1.0).unwrap();
            o.observe(v + 5.0, 1, 1.0).unwrap();
        }
        let pre = ClassDistribution::from_weights(vec![3.0, 3.0, 0.0]);
        let c = o.best_split(0, &pre).unwrap();
        assert!(c.post_split.iter().all(|b| b.weight(2) == 0.0));
        check_conservation(&pre, &c);
    }

    #[test]
    fn well_separated_numeric() {
        let mut o = GaussianObserver::new(2, 100);
        let pre = ClassDistribution::from_weights(vec![50.0, 50.0]);
        for i in 0..50 {
            let jitter = (i as f64 / 49.0) * 2.0 - 1.0;
            o.observe(-10.0 + jitter, 0, 1.0).unwrap();
            o.observe(10.0 + jitter, 1, 1.0).unwrap();
        }
        let c = o.best_split(0, &pre).unwrap();
        assert!((c.merit - entropy(&pre)).abs() < 0.05, "{}", c.merit);
        match c.test {
            SplitTest::Threshold(t) => assert!(t > -9.0 && t < 9.0),
            _ => panic!(),
        }
    }

    #[test]
    fn constant_value_has_no_candidate() {
        let mut o = GaussianObserver::new(2, 100);
        for class in [0, 1, 0, 1] {
            o.observe(4.2, class, 1.0).unwrap();
        }
        assert!(o.candidate_thresholds().is_empty());
        assert!(o
            .best_split(0, &ClassDistribution::from_weights(vec![2.0, 2.0]))
            .is_none());
        assert!(GaussianObserver::new(2, 100)
            .best_split(0, &ClassDistribution::new(2))
            .is_none());
    }

    #[test]
    fn point_mass_goes_below_at_its_value() {
        let mut o = GaussianObserver::new(2, 10);
        o.observe(1.0, 0, 1.0).unwrap();
        o.observe(1.0, 0, 1.0).unwrap();
        o.observe(3.0, 1, 1.0).unwrap();
        assert_eq!(o.fraction_at_or_below(0, 1.0), Some(1.0));
        assert_eq!(o.fraction_at_or_below(0, 0.999), Some(0.0));
        assert_eq!(o.fraction_at_or_below(1, 2.0), Some(0.0));
    }

    #[test]
    fn normal_cdf_accuracy() {
        // reference values of the standard normal CDF
        let table = [
            (0.0, 0.5),
            (1.0, 0.841_344_746_068_542_9),
            (-1.96, 0.024_997_895_148_220_435),
            (3.0, 0.998_650_101_968_369_9),
            (-6.0, 9.865_876_450_376_98e-10),
        ];
        for (z, p) in table {
            assert!((normal_cdf(z) - p).abs() < 1e-12, "z = {z}");
        }
    }

    #[test]
    fn inherited_weight_is_conserved() {
        // pre carries more weight than the observer saw (inherited at split)
        let mut o = GaussianObserver::new(3, 20);
        for i in 0..40 {
            o.observe(i as f64 * 0.1, 0, 1.0).unwrap();
            o.observe(2.0 + i as f64 * 0.1, 1, 1.0).unwrap();
        }
        let pre = ClassDistribution::from_weights(vec![90.0, 55.0, 7.5]);
        let c = o.best_split(0, &pre).unwrap();
        check_conservation(&pre, &c);
    }

    proptest! {
        #[test]
        fn gaussian_matches_two_pass(values in proptest::collection::vec(-1e3f64..1e3, 2..2000)) {
            let mut est = GaussianEstimator::default();
            for &v in &values {
                est.add(v, 1.0);
            }
            let n = values.len() as f64;
            let mean = values.iter().sum::<f64>() / n;
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
            prop_assert!((est.mean() - mean).abs() <= 1e-9 * mean.abs().max(1.0));
            prop_assert!((est.variance() - var).abs() <= 1e-9 * var.max(1.0));
        }

        #[test]
        fn best_threshold_is_argmax_and_conserves(
            obs in proptest::collection::vec((-5.0f64..5.0, 0usize..3), 5..200),
        ) {
            let mut o = GaussianObserver::new(3, 25);
            let mut pre = ClassDistribution::new(3);
            for &(v, c) in &obs {
                o.observe(v + c as f64, c, 1.0).unwrap();
                pre.add(c, 1.0);
            }
            if let Some(best) = o.best_split(0, &pre) {
                check_conservation(&pre, &best);
                for t in o.candidate_thresholds() {
                    if let Some(c) = o.evaluate_threshold(0, t, &pre) {
                        prop_assert!(best.merit >= c.merit);
                    }
                }
            }
        }
    }
}
