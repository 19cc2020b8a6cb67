//! Declarative experiment description, read from TOML.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use svfdt_core::eval::BaselineMode;
use svfdt_core::streams::{
    CsvSchema, CsvStream, LedGenerator, RbfConfig, RbfGenerator, SeaConfig, SeaGenerator,
    StreamSource,
};
use svfdt_core::{Algorithm, LeafPrediction, SkipRule, TreeConfig};

use crate::error::{CliError, CliResult};

/// One data source. Synthetic sources are re-generated from the run's seed;
/// CSV files ignore it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StreamSpec {
    Led {
        name: Option<String>,
        instances: u64,
        /// Probability of flipping each segment.
        noise: f64,
        #[serde(default = "default_irrelevant")]
        irrelevant: usize,
    },
    Sea {
        name: Option<String>,
        instances: u64,
        #[serde(default = "default_sea_thresholds")]
        thresholds: Vec<f64>,
        /// Defaults to an even split of the stream across thresholds.
        block_size: Option<u64>,
        #[serde(default = "default_sea_noise")]
        noise: f64,
    },
    Rbf {
        name: Option<String>,
        instances: u64,
        #[serde(default = "default_centroids")]
        centroids: usize,
        #[serde(default = "default_rbf_attributes")]
        attributes: usize,
        #[serde(default = "default_rbf_classes")]
        classes: usize,
        #[serde(default = "default_max_std_dev")]
        max_std_dev: f64,
    },
    Csv {
        name: Option<String>,
        /// Relative paths resolve against the config file's directory.
        path: PathBuf,
        schema: CsvSchema,
    },
}

fn default_irrelevant() -> usize {
    17
}
fn default_sea_thresholds() -> Vec<f64> {
    SeaConfig::default().thresholds
}
fn default_sea_noise() -> f64 {
    SeaConfig::default().noise
}
fn default_centroids() -> usize {
    RbfConfig::default().centroids
}
fn default_rbf_attributes() -> usize {
    RbfConfig::default().attributes
}
fn default_rbf_classes() -> usize {
    RbfConfig::default().classes
}
fn default_max_std_dev() -> f64 {
    RbfConfig::default().max_std_dev
}

impl StreamSpec {
    /// The configured name, or one derived from the parameters
    /// (`led_10`, `sea`, `rbf_10`, the CSV file stem).
    pub fn name(&self) -> String {
        let explicit = match self {
            StreamSpec::Led { name, .. }
            | StreamSpec::Sea { name, .. }
            | StreamSpec::Rbf { name, .. }
            | StreamSpec::Csv { name, .. } => name.clone(),
        };
        explicit.unwrap_or_else(|| match self {
            StreamSpec::Led { noise, .. } => format!("led_{}", (noise * 100.0).round()),
            StreamSpec::Sea { .. } => "sea".into(),
            StreamSpec::Rbf { attributes, .. } => format!("rbf_{attributes}"),
            StreamSpec::Csv { path, .. } => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "csv".into()),
        })
    }

    pub fn open(&self, seed: u64) -> CliResult<Box<dyn StreamSource>> {
        Ok(match self {
            StreamSpec::Led {
                instances,
                noise,
                irrelevant,
                ..
            } => Box::new(LedGenerator::new(*noise, *irrelevant, seed, *instances)?),
            StreamSpec::Sea {
                instances,
                thresholds,
                block_size,
                noise,
                ..
            } => {
                let config = SeaConfig {
                    thresholds: thresholds.clone(),
                    block_size: *block_size,
                    noise: *noise,
                };
                Box::new(SeaGenerator::new(config, seed, *instances)?)
            }
            StreamSpec::Rbf {
                instances,
                centroids,
                attributes,
                classes,
                max_std_dev,
                ..
            } => {
                let config = RbfConfig {
                    centroids: *centroids,
                    attributes: *attributes,
                    classes: *classes,
                    max_std_dev: *max_std_dev,
                };
                Box::new(RbfGenerator::new(config, seed, *instances)?)
            }
            StreamSpec::Csv { path, schema, .. } => Box::new(CsvStream::open(path, schema)?),
        })
    }

    fn instances(&self) -> Option<u64> {
        match self {
            StreamSpec::Led { instances, .. }
            | StreamSpec::Sea { instances, .. }
            | StreamSpec::Rbf { instances, .. } => Some(*instances),
            StreamSpec::Csv { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub streams: Vec<StreamSpec>,
    pub algorithms: Vec<Algorithm>,
    pub tie_thresholds: Vec<f64>,
    pub delta: f64,
    pub grace_period: u32,
    pub leaf_prediction: LeafPrediction,
    pub numeric_bins: usize,
    pub skip_rule: SkipRule,
    pub retain_deactivated: bool,
    pub seeds: Vec<u64>,
    /// Repeats of each (stream, algorithm, τ, seed) run; only timings differ.
    pub repetitions: u32,
    pub snapshot_every: u64,
    pub baseline: BaselineMode,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let tree = TreeConfig::default();
        ExperimentConfig {
            streams: Vec::new(),
            algorithms: Algorithm::ALL.to_vec(),
            tie_thresholds: vec![0.05, 0.10, 0.15, 0.20],
            delta: tree.delta,
            grace_period: tree.grace_period,
            leaf_prediction: tree.leaf_prediction,
            numeric_bins: tree.numeric_bins,
            skip_rule: tree.skip_rule,
            retain_deactivated: tree.retain_deactivated,
            seeds: vec![1],
            repetitions: 1,
            snapshot_every: 10_000,
            baseline: BaselineMode::default(),
            output_dir: PathBuf::from("results"),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| {
            // toml reports the offending key in its message
            CliError::config("config", e.message().trim().to_string())
        })
    }

    /// Reads and validates a config file. Relative CSV paths are resolved
    /// against the file's directory.
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut config = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        for stream in &mut config.streams {
            if let StreamSpec::Csv { path, .. } = stream {
                if path.is_relative() {
                    *path = base.join(&*path);
                }
            }
        }
        config.validate()?;
        Ok(config)
    }

    /// Tree parameters for one τ of the grid.
    pub fn tree_config(&self, tie_threshold: f64) -> TreeConfig {
        TreeConfig {
            grace_period: self.grace_period,
            delta: self.delta,
            tie_threshold,
            leaf_prediction: self.leaf_prediction,
            numeric_bins: self.numeric_bins,
            skip_rule: self.skip_rule,
            retain_deactivated: self.retain_deactivated,
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.streams.is_empty() {
            return Err(CliError::config(
                "streams",
                "at least one stream is required",
            ));
        }
        if self.algorithms.is_empty() {
            return Err(CliError::config(
                "algorithms",
                "at least one algorithm is required",
            ));
        }
        if self.tie_thresholds.is_empty() {
            return Err(CliError::config(
                "tie_thresholds",
                "at least one value is required",
            ));
        }
        for (i, tau) in self.tie_thresholds.iter().enumerate() {
            if !(*tau >= 0.0 && tau.is_finite()) {
                return Err(CliError::config(
                    format!("tie_thresholds[{i}]"),
                    format!("must be non-negative, got {tau}"),
                ));
            }
        }
        if self.seeds.is_empty() {
            return Err(CliError::config("seeds", "at least one seed is required"));
        }
        if self.repetitions < 1 {
            return Err(CliError::config("repetitions", "must be at least 1"));
        }
        if self.snapshot_every < 1 {
            return Err(CliError::config("snapshot_every", "must be at least 1"));
        }
        self.tree_config(self.tie_thresholds[0]).validate()?;

        let mut names = BTreeSet::new();
        for (i, stream) in self.streams.iter().enumerate() {
            let name = stream.name();
            let field = |f: &str| format!("streams[{i}].{f}");
            if name.is_empty() || name.contains(['/', '\\']) {
                return Err(CliError::config(
                    field("name"),
                    format!("`{name}` is not usable as a file name"),
                ));
            }
            if !names.insert(name.clone()) {
                return Err(CliError::config(
                    field("name"),
                    format!("duplicate stream name `{name}`"),
                ));
            }
            if stream.instances() == Some(0) {
                return Err(CliError::config(field("instances"), "must be at least 1"));
            }
            match stream {
                StreamSpec::Csv { schema, .. } => {
                    schema.to_schema().map_err(|e| nest(e, &field("schema")))?;
                }
                // Generators validate their parameters on construction.
                _ => {
                    stream.open(0).map_err(|e| match e {
                        CliError::Config { field: f, message } => {
                            CliError::config(field(&f), message)
                        }
                        other => other,
                    })?;
                }
            }
        }
        Ok(())
    }

    /// Keeps only the named streams and algorithms; `None` keeps everything.
    pub fn filter(
        &mut self,
        streams: Option<&[String]>,
        algorithms: Option<&[Algorithm]>,
    ) -> CliResult<()> {
        if let Some(wanted) = streams {
            for w in wanted {
                if !self.streams.iter().any(|s| &s.name() == w) {
                    return Err(CliError::config("stream", format!("no stream named `{w}`")));
                }
            }
            self.streams.retain(|s| wanted.contains(&s.name()));
        }
        if let Some(wanted) = algorithms {
            self.algorithms.retain(|a| wanted.contains(a));
            if self.algorithms.is_empty() {
                return Err(CliError::config(
                    "algorithm",
                    "filter leaves no configured algorithm",
                ));
            }
        }
        Ok(())
    }

    /// SHA-256 over the result-determining part of the config: everything
    /// except the output directory.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.output_dir = PathBuf::new();
        let bytes = serde_json::to_vec(&canonical).expect("config serializes");
        hex::encode(Sha256::digest(bytes))
    }
}

fn nest(error: svfdt_core::Error, prefix: &str) -> CliError {
    match CliError::from(error) {
        CliError::Config { field, message } => {
            CliError::config(format!("{prefix}.{field}"), message)
        }
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
        [[streams]]
        kind = "led"
        noise = 0.1
        instances = 1000
    "#;

    #[test]
    fn defaults_fill_the_grid() {
        let config = ExperimentConfig::from_toml(MINIMAL).unwrap();
        config.validate().unwrap();
        assert_eq!(config.algorithms, Algorithm::ALL.to_vec());
        assert_eq!(config.tie_thresholds, vec![0.05, 0.10, 0.15, 0.20]);
        assert_eq!(config.grace_period, 200);
        assert_eq!(config.delta, 1e-5);
        assert_eq!(config.numeric_bins, 100);
        assert_eq!(config.streams[0].name(), "led_10");
    }

    #[test]
    fn errors_name_the_field() {
        let field_of = |extra: &str| {
            let config = ExperimentConfig::from_toml(&format!("{extra}\n{MINIMAL}")).unwrap();
            match config.validate() {
                Err(CliError::Config { field, .. }) => field,
                other => panic!("{other:?}"),
            }
        };
        assert_eq!(
            field_of("tie_thresholds = [0.05, -0.1]"),
            "tie_thresholds[1]"
        );
        assert_eq!(field_of("repetitions = 0"), "repetitions");
        assert_eq!(field_of("delta = 2.0"), "delta");
        assert_eq!(field_of("algorithms = []"), "algorithms");

        let bad_noise = MINIMAL.replace("0.1", "1.5");
        let config = ExperimentConfig::from_toml(&bad_noise).unwrap();
        assert!(
            matches!(config.validate(), Err(CliError::Config { field, .. }) if field.starts_with("streams[0]."))
        );
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = ExperimentConfig::from_toml(&format!("tau = [0.1]\n{MINIMAL}")).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("tau"), "{err}");
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let config = ExperimentConfig::from_toml(&format!("{MINIMAL}\n{MINIMAL}")).unwrap();
        assert!(
            matches!(config.validate(), Err(CliError::Config { field, .. }) if field == "streams[1].name")
        );
    }

    #[test]
    fn hash_ignores_the_output_directory() {
        let a = ExperimentConfig::from_toml(MINIMAL).unwrap();
        let mut b = a.clone();
        b.output_dir = "elsewhere".into();
        assert_eq!(a.hash(), b.hash());
        b.seeds = vec![2];
        assert_ne!(a.hash(), b.hash());
    }
}
