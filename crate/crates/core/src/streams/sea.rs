use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{rng, StreamRng, StreamSource};
use crate::error::{Error, Result};
use crate::schema::{Attribute, Instance, Schema};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SeaConfig {
    /// Concept thresholds, one per block, cycled.
    pub thresholds: Vec<f64>,
    /// Instances per concept; `None` splits the stream into one block per
    /// threshold.
    pub block_size: Option<u64>,
    pub noise: f64,
}

impl Default for SeaConfig {
    fn default() -> Self {
        SeaConfig {
            thresholds: vec![8.0, 9.0, 7.0, 9.5],
            block_size: None,
            noise: 0.10,
        }
    }
}

/// Three uniform attributes on `[0, 10]`; the class is `f1 + f2 <= θ` (class
/// 0, "le") or not (class 1, "gt"), with θ changing abruptly between blocks.
#[derive(Debug, Clone)]
pub struct SeaGenerator {
    schema: Schema,
    thresholds: Vec<f64>,
    block_size: u64,
    noise: f64,
    rng: StreamRng,
    emitted: u64,
    total: u64,
}

impl SeaGenerator {
    pub fn new(config: SeaConfig, seed: u64, instances: u64) -> Result<Self> {
        if config.thresholds.is_empty() {
            return Err(Error::config(
                "thresholds",
                "at least one threshold is required",
            ));
        }
        if !(0.0..=1.0).contains(&config.noise) {
            return Err(Error::config(
                "noise",
                format!("must lie in [0, 1], got {}", config.noise),
            ));
        }
        let block_size = match config.block_size {
            Some(0) => return Err(Error::config("block_size", "must be positive")),
            Some(b) => b,
            None => instances.div_ceil(config.thresholds.len() as u64).max(1),
        };
        let attributes = (1..=3)
            .map(|i| Attribute::numeric(format!("f{i}")))
            .collect();
        Ok(SeaGenerator {
            schema: Schema::new(attributes, vec!["le".into(), "gt".into()])?,
            thresholds: config.thresholds,
            block_size,
            noise: config.noise,
            rng: rng(seed),
            emitted: 0,
            total: instances,
        })
    }

    /// Threshold in force for the `index`-th instance (0-based).
    pub fn threshold_at(&self, index: u64) -> f64 {
        let block = (index / self.block_size) as usize;
        self.thresholds[block % self.thresholds.len()]
    }

    pub fn label(f1: f64, f2: f64, threshold: f64) -> usize {
        usize::from(f1 + f2 > threshold)
    }
}

impl Iterator for SeaGenerator {
    type Item = Instance;

    fn next(&mut self) -> Option<Instance> {
        if self.emitted >= self.total {
            return None;
        }
        let threshold = self.threshold_at(self.emitted);
        self.emitted += 1;
        let values: Vec<f64> = (0..3).map(|_| self.rng.random_range(0.0..=10.0)).collect();
        let mut label = Self::label(values[0], values[1], threshold);
        if self.noise > 0.0 && self.rng.random_bool(self.noise) {
            label = 1 - label;
        }
        Some(Instance::labeled(values, label))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.total - self.emitted) as usize;
        (n, Some(n))
    }
}

impl StreamSource for SeaGenerator {
    fn schema(&self) -> &Schema {
        &self.schema
    }

    fn declared_len(&self) -> Option<u64> {
        Some(self.total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn noiseless() -> SeaConfig {
        SeaConfig {
            noise: 0.0,
            ..SeaConfig::default()
        }
    }

    #[test]
    fn labelling_rule() {
        for t in [8.0, 9.0, 7.0, 9.5] {
            assert_eq!(SeaGenerator::label(0.0, 0.0, t), 0);
        }
        assert_eq!(SeaGenerator::label(5.0, 4.0, 8.0), 1);
        assert_eq!(SeaGenerator::label(4.0, 4.0, 8.0), 0);
    }

    #[test]
    fn blocks_cycle_through_thresholds() {
        let g = SeaGenerator::new(noiseless(), 0, 400).unwrap();
        assert_eq!(g.threshold_at(0), 8.0);
        assert_eq!(g.threshold_at(99), 8.0);
        assert_eq!(g.threshold_at(100), 9.0);
        assert_eq!(g.threshold_at(399), 9.5);
        let fixed = SeaGenerator::new(
            SeaConfig {
                block_size: Some(10),
                ..noiseless()
            },
            0,
            400,
        )
        .unwrap();
        assert_eq!(fixed.threshold_at(45), 8.0);
    }

    #[test]
    fn noiseless_labels_follow_the_concept() {
        let g = SeaGenerator::new(noiseless(), 4, 4_000).unwrap();
        let schema = g.schema().clone();
        let reference = g.clone();
        for (i, x) in g.enumerate() {
            schema.validate(&x).unwrap();
            assert!(x.values.iter().all(|v| (0.0..=10.0).contains(v)));
            assert_eq!(
                x.label.unwrap(),
                SeaGenerator::label(x.values[0], x.values[1], reference.threshold_at(i as u64))
            );
        }
    }

    #[test]
    fn class_balance_at_threshold_eight() {
        let n = 100_000;
        let g = SeaGenerator::new(
            SeaConfig {
                thresholds: vec![8.0],
                ..noiseless()
            },
            2,
            n,
        )
        .unwrap();
        let low = g.filter(|x| x.label == Some(0)).count() as f64 / n as f64;
        // P(U + V <= 8) = 8^2 / 200
        assert!((low - 0.32).abs() <= 0.02, "{low}");
    }

    #[test]
    fn rejects_empty_thresholds() {
        let config = SeaConfig {
            thresholds: vec![],
            ..SeaConfig::default()
        };
        assert!(SeaGenerator::new(config, 0, 10).is_err());
    }
}
