//! Instance sources: seeded synthetic generators and a CSV reader.
//!
//! Every generator draws from [`StreamRng`], so a configuration and a seed
//! fully determine the sequence of instances it yields.

mod csv;
mod led;
mod rbf;
mod sea;

pub use self::csv::{CsvAttribute, CsvSchema, CsvStream};
pub use self::led::LedGenerator;
pub use self::rbf::{Centroid, RbfConfig, RbfGenerator};
pub use self::sea::{SeaConfig, SeaGenerator};

use rand::SeedableRng;

use crate::schema::{Instance, Schema};

/// Generator used by every synthetic stream.
pub type StreamRng = rand_chacha::ChaCha8Rng;

/// Identifier recorded in run metadata next to the seed.
pub const RNG_ALGORITHM: &str = "chacha8/seed_from_u64";

pub(crate) fn rng(seed: u64) -> StreamRng {
    StreamRng::seed_from_u64(seed)
}

pub trait StreamSource: Iterator<Item = Instance> + Send {
    fn schema(&self) -> &Schema;

    /// Number of instances the source will yield, when known up front.
    fn declared_len(&self) -> Option<u64>;
}

impl<S: StreamSource + ?Sized> StreamSource for Box<S> {
    fn schema(&self) -> &Schema {
        (**self).schema()
    }

    fn declared_len(&self) -> Option<u64> {
        (**self).declared_len()
    }
}
