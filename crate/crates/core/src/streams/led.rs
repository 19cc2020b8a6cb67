use rand::Rng;

use super::{rng, StreamRng, StreamSource};
use crate::error::{Error, Result};
use crate::schema::{Attribute, Instance, Schema};

/// Segments a..g of a seven-segment display for each digit.
const SEGMENTS: [[u8; 7]; 10] = [
    [1, 1, 1, 0, 1, 1, 1],
    [0, 0, 1, 0, 0, 1, 0],
    [1, 0, 1, 1, 1, 0, 1],
    [1, 0, 1, 1, 0, 1, 1],
    [0, 1, 1, 1, 0, 1, 0],
    [1, 1, 0, 1, 0, 1, 1],
    [1, 1, 0, 1, 1, 1, 1],
    [1, 0, 1, 0, 0, 1, 0],
    [1, 1, 1, 1, 1, 1, 1],
    [1, 1, 1, 1, 0, 1, 1],
];

/// Digits shown on a seven-segment display. Each of the seven segment
/// attributes is inverted with probability `noise`; the remaining attributes
/// are random bits.
#[derive(Debug, Clone)]
pub struct LedGenerator {
    schema: Schema,
    noise: f64,
    rng: StreamRng,
    remaining: u64,
    total: u64,
}

impl LedGenerator {
    pub const RELEVANT: usize = 7;

    pub fn new(noise: f64, irrelevant: usize, seed: u64, instances: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&noise) {
            return Err(Error::config(
                "noise",
                format!("must lie in [0, 1], got {noise}"),
            ));
        }
        let attributes = (0..Self::RELEVANT + irrelevant)
            .map(|i| Attribute::nominal(format!("att{}", i + 1), 2))
            .collect();
        Ok(LedGenerator {
            schema: Schema::with_class_count(attributes, 10)?,
            noise,
            rng: rng(seed),
            remaining: instances,
            total: instances,
        })
    }

    /// Noise-free segment encoding of `digit`.
    pub fn segments(digit: usize) -> [u8; 7] {
        SEGMENTS[digit]
    }
}

impl Iterator for LedGenerator {
    type Item = Instance;

    fn next(&mut self) -> Option<Instance> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let digit = self.rng.random_range(0..10);
        let mut values = Vec::with_capacity(self.schema.attribute_count());
        for &segment in &SEGMENTS[digit] {
            let flip = self.noise > 0.0 && self.rng.random_bool(self.noise);
            values.push(f64::from(segment ^ u8::from(flip)));
        }
        for _ in Self::RELEVANT..self.schema.attribute_count() {
            values.push(f64::from(u8::from(self.rng.random_bool(0.5))));
        }
        Some(Instance::labeled(values, digit))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.remaining as usize;
        (n, Some(n))
    }
}

impl StreamSource for LedGenerator {
    fn schema(&self) -> &Schema {
        &self.schema
    }

    fn declared_len(&self) -> Option<u64> {
        Some(self.total)
    }
}
