//! Run configuration shared by every pipeline command.
//!
//! ```toml
//! seed = 42
//!
//! [paths]
//! profiles = "profiles.csv"
//! encoding = "encoding.toml"
//! lexicon = "lexicon.tsv"
//!
//! [rank]
//! weights = [2, 1, 1, 1, 1]
//!
//! [evaluate]
//! threshold = 0.8
//! ```
//!
//! Relative paths resolve against the directory holding the config file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::baseline::TrainingConfig;
use crate::error::{Error, Result};
use crate::preprocess::ClassWeights;
use crate::topsis::Direction;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    /// Output directory. Not echoed into artifacts.
    #[serde(skip_serializing)]
    pub out: PathBuf,
    pub paths: Paths,
    pub rank: RankSettings,
    pub preprocess: PreprocessSettings,
    pub train: TrainSettings,
    pub evaluate: EvaluateSettings,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Paths {
    pub profiles: Option<PathBuf>,
    pub encoding: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    /// Score files for `compare` when none are given on the command line.
    pub scores: Vec<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RankSettings {
    /// Encoded feature columns used as criteria. Defaults to every encoded
    /// column except `overall_score`.
    pub criteria: Option<Vec<String>>,
    /// Defaults to equal weights.
    pub weights: Option<Vec<f64>>,
    /// Defaults to all `benefit`.
    pub directions: Option<Vec<Direction>>,
    /// Closeness is multiplied by this before comparison with
    /// `reference_score` values.
    pub reference_scale: f64,
}

impl Default for RankSettings {
    fn default() -> Self {
        RankSettings {
            criteria: None,
            weights: None,
            directions: None,
            reference_scale: 100.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StageOrder {
    /// Split first; augment and balance the training part only.
    #[default]
    SplitFirst,
    /// Augment and balance everything, then split.
    AugmentFirst,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PreprocessSettings {
    pub train_fraction: f64,
    pub replacement_fraction: f64,
    pub augment: bool,
    pub balance: bool,
    pub order: StageOrder,
}

impl Default for PreprocessSettings {
    fn default() -> Self {
        PreprocessSettings {
            train_fraction: 0.8,
            replacement_fraction: 0.3,
            augment: true,
            balance: true,
            order: StageOrder::SplitFirst,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainSettings {
    pub epochs: usize,
    pub learning_rate: f64,
    pub patience: usize,
    pub min_count: usize,
    /// Derive class weights from the training split (`true`) or use 1/1.
    pub class_weights: bool,
}

impl Default for TrainSettings {
    fn default() -> Self {
        let d = TrainingConfig::default();
        TrainSettings {
            epochs: d.epochs,
            learning_rate: d.learning_rate,
            patience: d.early_stopping_patience,
            min_count: d.min_count,
            class_weights: true,
        }
    }
}

impl TrainSettings {
    pub fn training_config(&self, class_weights: ClassWeights, rng_seed: u64) -> TrainingConfig {
        TrainingConfig {
            epochs: self.epochs,
            learning_rate: self.learning_rate,
            class_weights,
            rng_seed,
            early_stopping_patience: self.patience,
            min_count: self.min_count,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvaluateSettings {
    /// Fixed decision threshold; when absent the Youden-optimal one is used.
    pub threshold: Option<f64>,
    /// Parameter counts by model name (score file stem), for comparisons.
    pub parameter_counts: BTreeMap<String, u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 42,
            out: PathBuf::from("out"),
            paths: Paths::default(),
            rank: RankSettings::default(),
            preprocess: PreprocessSettings::default(),
            train: TrainSettings::default(),
            evaluate: EvaluateSettings::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: RunConfig = toml::from_str(text).map_err(|e| Error::format("run config", e))?;
        config.validate()?;
        Ok(config)
    }

    /// Loads a config file and resolves its relative paths against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        config.resolve_paths(base);
        Ok(config)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for p in [
            &mut self.paths.profiles,
            &mut self.paths.encoding,
            &mut self.paths.lexicon,
        ]
        .into_iter()
        .flatten()
        {
            fix(p);
        }
        self.paths.scores.iter_mut().for_each(fix);
        fix(&mut self.out);
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::format("run config", e))
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.preprocess;
        if !(p.train_fraction > 0.0 && p.train_fraction < 1.0) {
            return Err(Error::Config(format!(
                "preprocess.train_fraction {} not in (0, 1)",
                p.train_fraction
            )));
        }
        if !(p.replacement_fraction > 0.0 && p.replacement_fraction <= 1.0) {
            return Err(Error::Config(format!(
                "preprocess.replacement_fraction {} not in (0, 1]",
                p.replacement_fraction
            )));
        }
        if let Some(w) = &self.rank.weights {
            if w.iter().any(|x| !x.is_finite() || *x < 0.0) || !(w.iter().sum::<f64>() > 0.0) {
                return Err(Error::Config(
                    "rank.weights must be non-negative with a positive sum".into(),
                ));
            }
        }
        if !(self.rank.reference_scale.is_finite() && self.rank.reference_scale > 0.0) {
            return Err(Error::Config("rank.reference_scale must be positive".into()));
        }
        if let Some(t) = self.evaluate.threshold {
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::Config(format!("evaluate.threshold {t} not in [0, 1]")));
            }
        }
        if self.train.epochs == 0 {
            return Err(Error::Config("train.epochs must be at least 1".into()));
        }
        if !(self.train.learning_rate > 0.0) {
            return Err(Error::Config("train.learning_rate must be positive".into()));
        }
        if self.out.as_os_str().is_empty() {
            return Err(Error::Config("output directory must be non-empty".into()));
        }
        Ok(())
    }

    pub fn profiles_path(&self) -> Result<&Path> {
        required(&self.paths.profiles, "paths.profiles")
    }

    pub fn encoding_path(&self) -> Result<&Path> {
        required(&self.paths.encoding, "paths.encoding")
    }

    pub fn lexicon_path(&self) -> Result<&Path> {
        required(&self.paths.lexicon, "paths.lexicon")
    }
}

fn required<'a>(p: &'a Option<PathBuf>, key: &str) -> Result<&'a Path> {
    p.as_deref()
        .ok_or_else(|| Error::Config(format!("`{key}` is not set")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let c = RunConfig::from_toml(
            r#"
seed = 9
[paths]
profiles = "p.csv"
[rank]
weights = [2.0, 1.0]
directions = ["benefit", "cost"]
[preprocess]
order = "augment-first"
[evaluate]
threshold = 0.8
"#,
        )
        .unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.rank.directions.as_deref(), Some(&[Direction::Benefit, Direction::Cost][..]));
        assert_eq!(c.preprocess.order, StageOrder::AugmentFirst);
        assert_eq!(c.preprocess.train_fraction, 0.8);
        assert_eq!(c.evaluate.threshold, Some(0.8));
        assert_eq!(c.train.epochs, 200);
    }

    #[test]
    fn invalid_values_rejected() {
        assert!(RunConfig::from_toml("[preprocess]\ntrain_fraction = 1.0").is_err());
        assert!(RunConfig::from_toml("[rank]\nweights = [0.0, 0.0]").is_err());
        assert!(RunConfig::from_toml("[evaluate]\nthreshold = 2.0").is_err());
        assert!(RunConfig::from_toml("bogus = 1").is_err());
    }

    #[test]
    fn relative_paths_resolve_against_config_dir() {
        let mut c = RunConfig::from_toml("[paths]\nprofiles = \"p.csv\"").unwrap();
        c.resolve_paths(Path::new("/data/run"));
        assert_eq!(c.profiles_path().unwrap(), Path::new("/data/run/p.csv"));
        assert!(c.lexicon_path().is_err());
    }
}
