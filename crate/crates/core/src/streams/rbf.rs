use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{rng, StreamRng, StreamSource};
use crate::error::{Error, Result};
use crate::schema::{Attribute, Instance, Schema};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RbfConfig {
    pub centroids: usize,
    pub attributes: usize,
    pub classes: usize,
    /// Centroid deviations are drawn uniformly from `[0, max_std_dev)`.
    pub max_std_dev: f64,
}

impl Default for RbfConfig {
    fn default() -> Self {
        RbfConfig {
            centroids: 50,
            attributes: 10,
            classes: 2,
            max_std_dev: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Centroid {
    pub center: Vec<f64>,
    pub class: usize,
    pub weight: f64,
    pub std_dev: f64,
}

/// Random radial basis function stream: each instance is a Gaussian offset
/// from a weighted random centroid, labeled with that centroid's class.
#[derive(Debug, Clone)]
pub struct RbfGenerator {
    schema: Schema,
    centroids: Vec<Centroid>,
    cumulative: Vec<f64>,
    rng: StreamRng,
    remaining: u64,
    total: u64,
}

impl RbfGenerator {
    /// Centroids come from a model generator seeded from `seed`; instances
    /// from a second, independent one. The first `classes` centroids take
    /// one class each so every class is represented.
    pub fn new(config: RbfConfig, seed: u64, instances: u64) -> Result<Self> {
        if config.centroids < config.classes {
            return Err(Error::config(
                "centroids",
                format!(
                    "need at least one centroid per class ({} < {})",
                    config.centroids, config.classes
                ),
            ));
        }
        if config.attributes == 0 {
            return Err(Error::config("attributes", "must be positive"));
        }
        if !(config.max_std_dev >= 0.0) {
            return Err(Error::config("max_std_dev", "must be non-negative"));
        }
        let mut model = rng(seed);
        let centroids = (0..config.centroids)
            .map(|i| Centroid {
                center: (0..config.attributes)
                    .map(|_| model.random::<f64>())
                    .collect(),
                class: if i < config.classes {
                    i
                } else {
                    model.random_range(0..config.classes)
                },
                weight: model.random::<f64>(),
                std_dev: model.random::<f64>() * config.max_std_dev,
            })
            .collect();
        Self::with_centroids(
            centroids,
            config.classes,
            seed.wrapping_add(0x9E37_79B9_7F4A_7C15),
            instances,
        )
    }

    pub fn with_centroids(
        centroids: Vec<Centroid>,
        classes: usize,
        seed: u64,
        instances: u64,
    ) -> Result<Self> {
        let Some(first) = centroids.first() else {
            return Err(Error::config(
                "centroids",
                "at least one centroid is required",
            ));
        };
        let dims = first.center.len();
        if centroids
            .iter()
            .any(|c| c.center.len() != dims || c.class >= classes || !(c.weight >= 0.0))
        {
            return Err(Error::config(
                "centroids",
                "centroids must share dimensions and use valid classes and weights",
            ));
        }
        let mut cumulative = Vec::with_capacity(centroids.len());
        let mut acc = 0.0;
        for c in &centroids {
            acc += c.weight;
            cumulative.push(acc);
        }
        if !(acc > 0.0) {
            return Err(Error::config(
                "centroids",
                "total centroid weight must be positive",
            ));
        }
        let attributes = (0..dims)
            .map(|i| Attribute::numeric(format!("x{i}")))
            .collect();
        Ok(RbfGenerator {
            schema: Schema::with_class_count(attributes, classes)?,
            centroids,
            cumulative,
            rng: rng(seed),
            remaining: instances,
            total: instances,
        })
    }

    pub fn centroids(&self) -> &[Centroid] {
        &self.centroids
    }
}

impl Iterator for RbfGenerator {
    type Item = Instance;

    fn next(&mut self) -> Option<Instance> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let total = *self.cumulative.last().expect("non-empty");
        let pick = self.rng.random::<f64>() * total;
        let index = self
            .cumulative
            .partition_point(|&c| c <= pick)
            .min(self.centroids.len() - 1);
        let centroid = &self.centroids[index];

        let mut direction: Vec<f64> = (0..centroid.center.len())
            .map(|_| self.rng.random::<f64>() * 2.0 - 1.0)
            .collect();
        let norm = direction.iter().map(|d| d * d).sum::<f64>().sqrt();
        let magnitude: f64 = StandardNormal.sample(&mut self.rng);
        let scale = if norm > 0.0 {
            magnitude * centroid.std_dev / norm
        } else {
            0.0
        };
        for (d, c) in direction.iter_mut().zip(&centroid.center) {
            *d = c + *d * scale;
        }
        Some(Instance::labeled(direction, centroid.class))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.remaining as usize;
        (n, Some(n))
    }
}

impl StreamSource for RbfGenerator {
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

    #[test]
    fn deterministic_and_valid() {
        let config = RbfConfig::default();
        let a: Vec<_> = RbfGenerator::new(config.clone(), 42, 100)
            .unwrap()
            .collect();
        let b: Vec<_> = RbfGenerator::new(config.clone(), 42, 100)
            .unwrap()
            .collect();
        assert_eq!(a, b);
        let g = RbfGenerator::new(config, 42, 1_000).unwrap();
        let schema = g.schema().clone();
        assert_eq!(schema.attribute_count(), 10);
        for x in g {
            schema.validate(&x).unwrap();
            assert!(x.label.unwrap() < 2);
        }
    }

    #[test]
    fn every_class_has_a_centroid() {
        let g = RbfGenerator::new(
            RbfConfig {
                centroids: 5,
                classes: 5,
                ..RbfConfig::default()
            },
            1,
            0,
        )
        .unwrap();
        let mut classes: Vec<_> = g.centroids().iter().map(|c| c.class).collect();
        classes.sort_unstable();
        assert_eq!(classes, vec![0, 1, 2, 3, 4]);
        assert!(RbfGenerator::new(
            RbfConfig {
                centroids: 1,
                classes: 2,
                ..RbfConfig::default()
            },
            1,
            0
        )
        .is_err());
    }

    #[test]
    fn separated_centroids_are_recoverable() {
        let centroids = vec![
            Centroid {
                center: vec![0.1, 0.1, 0.1],
                class: 0,
                weight: 1.0,
                std_dev: 0.01,
            },
            Centroid {
                center: vec![0.9, 0.9, 0.9],
                class: 1,
                weight: 2.0,
                std_dev: 0.01,
            },
        ];
        let g = RbfGenerator::with_centroids(centroids.clone(), 2, 8, 10_000).unwrap();
        let mut correct = 0;
        let mut ones = 0;
        for x in g {
            let d = |c: &Centroid| {
                c.center
                    .iter()
                    .zip(&x.values)
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
            };
            let nearest = if d(&centroids[0]) <= d(&centroids[1]) {
                0
            } else {
                1
            };
            correct += usize::from(Some(nearest) == x.label);
            ones += usize::from(x.label == Some(1));
        }
        assert!(correct as f64 / 10_000.0 >= 0.99);
        // centroid 1 carries two thirds of the weight
        assert!((ones as f64 / 10_000.0 - 2.0 / 3.0).abs() < 0.03);
    }
}
