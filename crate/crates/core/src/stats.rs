//! Information-theoretic split heuristics and the Hoeffding bound.

use crate::dist::ClassDistribution;
use crate::error::{Error, Result};

/// Shannon entropy of a class distribution, in bits. Zero for an empty one.
pub fn entropy(dist: &ClassDistribution) -> f64 {
    entropy_of(dist.weights(), dist.total())
}

pub(crate) fn entropy_of(weights: &[f64], total: f64) -> f64 {
    if total <= 0.0 {
        return 0.0;
    }
    let mut h = 0.0;
    for &w in weights {
        if w > 0.0 {
            let p = w / total;
            h -= p * p.log2();
        }
    }
    // Rounding can push a pure distribution slightly below zero.
    h.max(0.0)
}

/// Entropy reduction from partitioning `pre` into `partitions`, in bits.
///
/// The partition totals must add up to `pre.total()` within a relative
/// tolerance of 1e-6.
pub fn information_gain(pre: &ClassDistribution, partitions: &[ClassDistribution]) -> Result<f64> {
    let n = pre.total();
    let split_total: f64 = partitions.iter().map(ClassDistribution::total).sum();
    if (split_total - n).abs() > 1e-6 * n.abs().max(split_total.abs()) {
        return Err(Error::contract(format!(
            "partition totals sum to {split_total}, pre-split total is {n}"
        )));
    }
    Ok(gain_unchecked(pre, partitions))
}

pub(crate) fn gain_unchecked(pre: &ClassDistribution, partitions: &[ClassDistribution]) -> f64 {
    let n = pre.total();
    if n <= 0.0 {
        return 0.0;
    }
    let remainder: f64 = partitions
        .iter()
        .filter(|p| p.total() > 0.0)
        .map(|p| p.total() / n * entropy(p))
        .sum();
    entropy(pre) - remainder
}

/// `sqrt(R² ln(1/δ) / 2n)`: with probability `1 - delta` the true mean of a
/// variable with range `range` lies within this distance of the mean of `n`
/// observations.
pub fn hoeffding_bound(range: f64, delta: f64, n: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::contract(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    if !(n >= 1.0) {
        return Err(Error::contract(format!(
            "need at least one observation, got n = {n}"
        )));
    }
    if !(range > 0.0) {
        return Err(Error::contract(format!(
            "range must be positive, got {range}"
        )));
    }
    Ok((range * range * (1.0 / delta).ln() / (2.0 * n)).sqrt())
}

/// Range of information gain with `class_count` classes.
pub fn gain_range(class_count: usize) -> f64 {
    (class_count.max(2) as f64).log2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(w: &[f64]) -> ClassDistribution {
        ClassDistribution::from_weights(w.to_vec())
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&d(&[5.0, 5.0])), 1.0);
        assert_eq!(entropy(&d(&[7.0, 0.0])), 0.0);
        assert!((entropy(&d(&[9.0, 1.0])) - 0.468_995_593_589_281_2).abs() < 1e-12);
        assert_eq!(entropy(&d(&[0.0, 0.0])), 0.0);
    }

    #[test]
    fn gain_examples() {
        let pre = d(&[5.0, 5.0]);
        assert_eq!(
            information_gain(&pre, &[d(&[5.0, 0.0]), d(&[0.0, 5.0])]).unwrap(),
            1.0
        );
        assert_eq!(information_gain(&pre, &[d(&[5.0, 5.0])]).unwrap(), 0.0);
        let g = information_gain(&d(&[6.0, 2.0]), &[d(&[4.0, 0.0]), d(&[2.0, 2.0])]).unwrap();
        assert!((g - 0.311_278_124_459_132_83).abs() < 1e-12);
        // empty partitions are ignored
        let g = information_gain(&pre, &[d(&[5.0, 0.0]), d(&[0.0, 0.0]), d(&[0.0, 5.0])]).unwrap();
        assert_eq!(g, 1.0);
    }

    #[test]
    fn gain_rejects_mismatched_totals() {
        let err = information_gain(&d(&[5.0, 5.0]), &[d(&[5.0, 0.0])]).unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
    }

    #[test]
    fn bound_examples() {
        let eps = hoeffding_bound(1.0, 1e-7, 200.0).unwrap();
        assert!((eps - 0.2007).abs() < 0.0005, "{eps}");
        let eps = hoeffding_bound(2.0, 0.05, 100.0).unwrap();
        assert!((eps - 0.244_774_683_068_081_64).abs() < 1e-12);
    }

    #[test]
    fn bound_rejects_bad_input() {
        assert!(hoeffding_bound(1.0, 0.0, 10.0).is_err());
        assert!(hoeffding_bound(1.0, 1.0, 10.0).is_err());
        assert!(hoeffding_bound(1.0, 0.5, 0.0).is_err());
        assert!(hoeffding_bound(0.0, 0.5, 10.0).is_err());
    }

    #[test]
    fn bound_vanishes_with_n() {
        let mut last = f64::INFINITY;
        for n in [1.0, 10.0, 100.0, 1e4, 1e8] {
            let eps = hoeffding_bound(1.0, 1e-5, n).unwrap();
            assert!(eps < last);
            last = eps;
        }
        assert!(last < 1e-3);
    }

    proptest! {
        #[test]
        fn entropy_is_bounded_and_permutation_invariant(
            mut w in proptest::collection::vec(0.0f64..100.0, 2..12),
            rot in 0usize..12,
        ) {
            let h = entropy(&d(&w));
            prop_assert!(h >= 0.0);
            prop_assert!(h <= (w.len() as f64).log2() + 1e-12);
            let k = rot % w.len();
            w.rotate_left(k);
            w.reverse();
            prop_assert!((entropy(&d(&w)) - h).abs() < 1e-12);
        }

        #[test]
        fn refinement_never_loses_information(
            rows in proptest::collection::vec(proptest::collection::vec(0.0f64..50.0, 3), 1..6),
        ) {
            let partitions: Vec<_> = rows.iter().map(|r| d(r)).collect();
            let pre = d(&(0..3).map(|c| rows.iter().map(|r| r[c]).sum()).collect::<Vec<_>>());
            let g = information_gain(&pre, &partitions).unwrap();
            prop_assert!(g >= -1e-12);
        }

        #[test]
        fn bound_is_monotone(r in 0.1f64..5.0, delta in 1e-9f64..0.5, n in 1.0f64..1e6) {
            let eps = hoeffding_bound(r, delta, n).unwrap();
            prop_assert!(hoeffding_bound(r * 1.1, delta, n).unwrap() > eps);
            prop_assert!(hoeffding_bound(r, delta, n * 1.1).unwrap() < eps);
            prop_assert!(hoeffding_bound(r, delta * 1.1, n).unwrap() < eps);
        }
    }
}
