//! Incremental decision trees for classifying data streams.
//!
//! The crate provides the classic Hoeffding tree (VFDT) and two strict
//! variants that gate tree growth on running statistics collected over the
//! split attempts they have seen. A learner reads one [`Instance`] at a time,
//! predicts it, and then learns from it, so it can be evaluated
//! prequentially with [`eval::prequential_run`].
//!
//! ```
//! use svfdt_core::streams::{LedGenerator, StreamSource};
//! use svfdt_core::{Algorithm, HoeffdingTree, TreeConfig};
//!
//! let stream = LedGenerator::new(0.1, 17, 7, 5_000).unwrap();
//! let mut tree = HoeffdingTree::new(stream.schema().clone(), TreeConfig::default(), Algorithm::SvfdtI).unwrap();
//! for instance in stream {
//!     tree.train_one(&instance).unwrap();
//! }
//! assert!(tree.size().nodes >= 1);
//! ```

// Guards like `!(x > 0.0)` are written that way to reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dist;
pub mod error;
pub mod eval;
pub mod observers;
pub mod schema;
pub mod stats;
pub mod streams;
pub mod svfdt;
pub mod tree;

pub use dist::ClassDistribution;
pub use error::{Error, Result};
pub use schema::{Attribute, AttributeKind, Instance, Schema};
pub use stats::{entropy, hoeffding_bound, information_gain};
pub use svfdt::{GrowthStatistics, RunningStat, SkipRule, SvfdtVariant};
pub use tree::{Algorithm, HoeffdingTree, LeafPrediction, TreeConfig, TreeSize};
