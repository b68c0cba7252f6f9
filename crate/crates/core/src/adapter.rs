//! File contracts shared with the external transformer fine-tuning adapter.
//!
//! The adapter reads a labeled-rows file (see [`crate::preprocess`]), writes
//! a score file (see [`crate::eval`]) and a per-epoch history file
//! `epoch,train_loss,val_loss,val_accuracy`. It exports raw probabilities
//! only; thresholds are chosen here, by `evaluate`.

use std::fmt;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{read_score_file, ScoredPrediction};
use crate::preprocess::ClassWeights;

pub const HISTORY_HEADER: [&str; 4] = ["epoch", "train_loss", "val_loss", "val_accuracy"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformerModel {
    Roberta,
    Distilbert,
    Lastbert,
}

impl TransformerModel {
    /// Published checkpoint name, where one is fixed.
    pub fn default_checkpoint(self) -> Option<&'static str> {
        match self {
            TransformerModel::Roberta => Some("roberta-base"),
            TransformerModel::Distilbert => Some("distilbert-base-uncased"),
            TransformerModel::Lastbert => None,
        }
    }
}

impl fmt::Display for TransformerModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TransformerModel::Roberta => "roberta",
            TransformerModel::Distilbert => "distilbert",
            TransformerModel::Lastbert => "lastbert",
        })
    }
}

/// Training recipe handed to the adapter, serialized as TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FineTuneConfig {
    pub model: TransformerModel,
    /// Overrides the model's default checkpoint; required for `lastbert`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoint: Option<String>,
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub warmup_steps: usize,
    pub weight_decay: f64,
    pub early_stopping_patience: usize,
    pub class_weights: ClassWeights,
    pub rng_seed: u64,
}

impl FineTuneConfig {
    pub fn new(model: TransformerModel, class_weights: ClassWeights, rng_seed: u64) -> Self {
        FineTuneConfig {
            model,
            checkpoint: None,
            epochs: 15,
            batch_size: 16,
            learning_rate: 2e-5,
            warmup_steps: 1000,
            weight_decay: 0.01,
            early_stopping_patience: 3,
            class_weights,
            rng_seed,
        }
    }

    pub fn checkpoint(&self) -> Result<&str> {
        self.checkpoint
            .as_deref()
            .or_else(|| self.model.default_checkpoint())
            .ok_or_else(|| Error::Config(format!("model `{}` needs an explicit checkpoint", self.model)))
    }

    pub fn validate(&self) -> Result<()> {
        self.checkpoint()?;
        if self.epochs == 0 || self.batch_size == 0 {
            return Err(Error::Config("epochs and batch_size must be positive".into()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::range("learning_rate", format!("{} must be positive", self.learning_rate)));
        }
        if !(self.weight_decay >= 0.0 && self.weight_decay.is_finite()) {
            return Err(Error::range("weight_decay", format!("{} must be >= 0", self.weight_decay)));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::format("fine-tune config", e))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: FineTuneConfig = toml::from_str(text).map_err(|e| Error::format("fine-tune config", e))?;
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdapterEpoch {
    pub epoch: usize,
    pub train_loss: f64,
    pub val_loss: f64,
    pub val_accuracy: f64,
}

/// Reads an adapter history file. Epochs must run 1, 2, ... without gaps,
/// losses must be finite and non-negative, accuracies in [0, 1].
pub fn read_adapter_history<R: Read>(source: R) -> Result<Vec<AdapterEpoch>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(source);
    let headers = reader
        .headers()
        .map_err(|e| Error::Contract(vec![format!("line 1: {e}")]))?;
    if headers.iter().ne(HISTORY_HEADER) {
        return Err(Error::Contract(vec![format!(
            "line 1: header must be `{}`",
            HISTORY_HEADER.join(",")
        )]));
    }
    let mut records = Vec::new();
    let mut violations = Vec::new();
    for (i, row) in reader.deserialize::<AdapterEpoch>().enumerate() {
        let line = i + 2;
        match row {
            Err(e) => violations.push(format!("line {line}: {e}")),
            Ok(r) => {
                if r.epoch != i + 1 {
                    violations.push(format!("line {line}: epoch {} out of sequence", r.epoch));
                } else if ![r.train_loss, r.val_loss].iter().all(|l| l.is_finite() && *l >= 0.0) {
                    violations.push(format!("line {line}: losses must be finite and >= 0"));
                } else if !(0.0..=1.0).contains(&r.val_accuracy) {
                    violations.push(format!("line {line}: val_accuracy {} not in [0, 1]", r.val_accuracy));
                }
                records.push(r);
            }
        }
    }
    if !violations.is_empty() {
        return Err(Error::Contract(violations));
    }
    if records.is_empty() {
        return Err(Error::Contract(vec!["history file has no epochs".into()]));
    }
    Ok(records)
}

/// Validates the files an adapter run produced and returns its predictions.
pub fn check_adapter_output(scores: &Path, history: &Path) -> Result<(Vec<ScoredPrediction>, Vec<AdapterEpoch>)> {
    let open = |p: &Path| std::fs::File::open(p).map_err(|e| Error::io(p, e));
    let predictions = read_score_file(open(scores)?).map_err(|e| e.in_file(scores))?;
    let epochs = read_adapter_history(open(history)?).map_err(|e| e.in_file(history))?;
    Ok((predictions, epochs))
}
