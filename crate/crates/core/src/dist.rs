use serde::{Deserialize, Serialize};

/// Per-class weights observed at a node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassDistribution {
    weights: Vec<f64>,
    total: f64,
}

impl ClassDistribution {
    pub fn new(class_count: usize) -> Self {
        ClassDistribution {
            weights: vec![0.0; class_count],
            total: 0.0,
        }
    }

    /// Negative entries are clamped to zero.
    pub fn from_weights(weights: Vec<f64>) -> Self {
        let weights: Vec<f64> = weights.into_iter().map(|w| w.max(0.0)).collect();
        let total = weights.iter().sum();
        ClassDistribution { weights, total }
    }

    #[inline]
    pub fn add(&mut self, class: usize, weight: f64) {
        self.weights[class] += weight;
        self.total += weight;
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, class: usize) -> f64 {
        self.weights[class]
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn class_count(&self) -> usize {
        self.weights.len()
    }

    /// True when at least two classes carry weight.
    pub fn is_impure(&self) -> bool {
        self.weights.iter().filter(|&&w| w > 0.0).count() >= 2
    }

    /// Index of the heaviest class; ties go to the lowest index.
    pub fn majority_class(&self) -> usize {
        let mut best = 0;
        for (class, &w) in self.weights.iter().enumerate() {
            if w > self.weights[best] {
                best = class;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn purity_and_majority() {
        let mut dist = ClassDistribution::new(3);
        assert!(!dist.is_impure());
        assert_eq!(dist.majority_class(), 0);
        dist.add(2, 1.5);
        assert!(!dist.is_impure());
        assert_eq!(dist.majority_class(), 2);
        dist.add(1, 1.5);
        assert!(dist.is_impure());
        assert_eq!(dist.majority_class(), 1);
        assert_eq!(dist.total(), 3.0);
    }
}
