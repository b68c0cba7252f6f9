//! Class-weighted logistic regression over token counts.
//!
//! A small, fully deterministic text scorer. It produces the same kind of
//! probability scores a fine-tuned encoder would, so the thresholding and
//! evaluation code can be exercised end to end without an ML framework.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::ScoredPrediction;
use crate::preprocess::{label_counts, BinaryLabel, ClassWeights, LabeledRow};
use crate::text::tokenize;

/// Token to column index, in first-appearance order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Vocabulary {
    index: IndexMap<String, usize>,
}

impl Vocabulary {
    pub fn from_tokens<I: IntoIterator<Item = String>>(tokens: I) -> Self {
        let mut index = IndexMap::new();
        for t in tokens {
            let next = index.len();
            index.entry(t).or_insert(next);
        }
        Vocabulary { index }
    }

    pub fn get(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.index.keys().map(String::as_str)
    }
}

/// Keeps tokens seen at least `min_count` times across the corpus.
pub fn fit_vocabulary<S: AsRef<str>>(texts: &[S], min_count: usize) -> Result<Vocabulary> {
    if texts.is_empty() {
        return Err(Error::Empty("vocabulary corpus".into()));
    }
    let mut counts: IndexMap<String, usize> = IndexMap::new();
    for text in texts {
        for token in tokenize(text.as_ref()) {
            *counts.entry(token).or_insert(0) += 1;
        }
    }
    let vocab = Vocabulary::from_tokens(
        counts
            .into_iter()
            .filter(|(_, c)| *c >= min_count)
            .map(|(t, _)| t),
    );
    if vocab.is_empty() {
        return Err(Error::Empty(format!("no token occurs at least {min_count} times")));
    }
    Ok(vocab)
}

/// Sparse bag-of-words counts, sorted by column index.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseVector {
    pub entries: Vec<(usize, f64)>,
}

impl SparseVector {
    pub fn dot(&self, dense: &[f64]) -> f64 {
        self.entries.iter().map(|&(i, v)| dense[i] * v).sum()
    }

    pub fn to_dense(&self, len: usize) -> Vec<f64> {
        let mut out = vec![0.0; len];
        for &(i, v) in &self.entries {
            out[i] = v;
        }
        out
    }
}

pub fn vectorize(text: &str, vocabulary: &Vocabulary) -> SparseVector {
    let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
    for token in tokenize(text) {
        if let Some(i) = vocabulary.get(&token) {
            *counts.entry(i).or_insert(0.0) += 1.0;
        }
    }
    SparseVector {
        entries: counts.into_iter().collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainingConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub class_weights: ClassWeights,
    /// Echoed into saved models; training itself draws no random numbers.
    pub rng_seed: u64,
    /// Consecutive epochs with loss improvement below `1e-9` before
    /// stopping. Zero disables early stopping.
    pub early_stopping_patience: usize,
    pub min_count: usize,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        TrainingConfig {
            epochs: 200,
            learning_rate: 0.1,
            class_weights: ClassWeights::uniform(),
            rng_seed: 0,
            early_stopping_patience: 3,
            min_count: 1,
        }
    }
}

impl TrainingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be at least 1".into()));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::Config(format!(
                "learning_rate {} must be positive",
                self.learning_rate
            )));
        }
        ClassWeights::new(self.class_weights.negative, self.class_weights.positive)?;
        Ok(())
    }
}

/// Mean class-weighted logistic loss over a fixed design matrix.
#[derive(Debug, Clone)]
pub struct WeightedLogisticObjective {
    rows: Vec<SparseVector>,
    labels: Vec<BinaryLabel>,
    class_weights: ClassWeights,
    dim: usize,
}

fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

impl WeightedLogisticObjective {
    pub fn new(rows: Vec<SparseVector>, labels: Vec<BinaryLabel>, class_weights: ClassWeights, dim: usize) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::Shape(format!("{} rows, {} labels", rows.len(), labels.len())));
        }
        if rows.is_empty() {
            return Err(Error::Empty("training rows".into()));
        }
        Ok(WeightedLogisticObjective {
            rows,
            labels,
            class_weights,
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn loss(&self, weights: &[f64], bias: f64) -> f64 {
        let n = self.rows.len() as f64;
        self.rows
            .iter()
            .zip(&self.labels)
            .map(|(x, &y)| {
                let margin = y.sign() * (x.dot(weights) + bias);
                self.class_weights.weight(y) * softplus(-margin)
            })
            .sum::<f64>()
            / n
    }

    /// Gradient with respect to `(weights, bias)`.
    pub fn gradient(&self, weights: &[f64], bias: f64) -> (Vec<f64>, f64) {
        let n = self.rows.len() as f64;
        let mut grad = vec![0.0; self.dim];
        let mut grad_bias = 0.0;
        for (x, &y) in self.rows.iter().zip(&self.labels) {
            let s = y.sign();
            let margin = s * (x.dot(weights) + bias);
            // d/dz of w * softplus(-s z) = -w * s * sigmoid(-s z)
            let dz = -self.class_weights.weight(y) * s * sigmoid(-margin) / n;
            for &(i, v) in &x.entries {
                grad[i] += dz * v;
            }
            grad_bias += dz;
        }
        (grad, grad_bias)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    #[serde(with = "vocab_serde")]
    pub vocabulary: Vocabulary,
    pub config: TrainingConfig,
}

mod vocab_serde {
    use super::Vocabulary;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Vocabulary, s: S) -> Result<S::Ok, S::Error> {
        v.tokens().collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vocabulary, D::Error> {
        let tokens = Vec::<String>::deserialize(d)?;
        let n = tokens.len();
        let vocab = Vocabulary::from_tokens(tokens);
        if vocab.len() != n {
            return Err(serde::de::Error::custom("duplicate vocabulary token"));
        }
        Ok(vocab)
    }
}

impl LinearModel {
    pub fn validate(&self) -> Result<()> {
        if self.weights.len() != self.vocabulary.len() {
            return Err(Error::Shape(format!(
                "{} weights for a vocabulary of {}",
                self.weights.len(),
                self.vocabulary.len()
            )));
        }
        if !self.bias.is_finite() || self.weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::range("model", "parameters must be finite"));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::format("model", e))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: LinearModel = serde_json::from_str(text).map_err(|e| Error::format("model", e))?;
        model.validate()?;
        Ok(model)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn save<W: Write>(&self, mut sink: W) -> Result<()> {
        sink.write_all(self.to_json()?.as_bytes())
            .map_err(|e| Error::format("writing model", e))
    }

    pub fn predict_proba(&self, text: &str) -> f64 {
        let z = vectorize(text, &self.vocabulary).dot(&self.weights) + self.bias;
        sigmoid(z).clamp(f64::EPSILON, 1.0 - f64::EPSILON)
    }

    /// One score-file row per labeled row.
    pub fn score_rows(&self, rows: &[LabeledRow]) -> Vec<ScoredPrediction> {
        rows.iter()
            .map(|r| ScoredPrediction {
                id: r.profile.id.clone(),
                probability: self.predict_proba(&r.text()),
                true_label: r.label,
            })
            .collect()
    }
}

pub fn predict_proba(model: &LinearModel, text: &str) -> f64 {
    model.predict_proba(text)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub loss: f64,
    pub learning_rate: f64,
    pub accepted: bool,
}

/// Full-batch gradient descent from zero weights.
///
/// A step that would raise the loss is rejected and the step size halved, so
/// the loss never increases across accepted steps.
pub fn train_with_history(rows: &[LabeledRow], config: &TrainingConfig) -> Result<(LinearModel, Vec<EpochRecord>)> {
    config.validate()?;
    let (neg, pos) = label_counts(rows);
    if neg == 0 || pos == 0 {
        return Err(Error::SingleClass(format!(
            "training needs both classes, got {neg} negatives and {pos} positives"
        )));
    }
    let texts: Vec<String> = rows.iter().map(LabeledRow::text).collect();
    let vocabulary = fit_vocabulary(&texts, config.min_count)?;
    let objective = WeightedLogisticObjective::new(
        texts.iter().map(|t| vectorize(t, &vocabulary)).collect(),
        rows.iter().map(|r| r.label).collect(),
        config.class_weights,
        vocabulary.len(),
    )?;
    let (weights, bias, history) = descend(&objective, config);
    let model = LinearModel {
        weights,
        bias,
        vocabulary,
        config: *config,
    };
    Ok((model, history))
}

pub fn train(rows: &[LabeledRow], config: &TrainingConfig) -> Result<LinearModel> {
    train_with_history(rows, config).map(|(m, _)| m)
}

pub(crate) fn descend(objective: &WeightedLogisticObjective, config: &TrainingConfig) -> (Vec<f64>, f64, Vec<EpochRecord>) {
    const MIN_IMPROVEMENT: f64 = 1e-9;
    let mut weights = vec![0.0; objective.dim()];
    let mut bias = 0.0;
    let mut loss = objective.loss(&weights, bias);
    let mut step = config.learning_rate;
    let mut stalled = 0;
    let mut history = Vec::with_capacity(config.epochs);

    for epoch in 1..=config.epochs {
        let (grad, grad_bias) = objective.gradient(&weights, bias);
        let candidate: Vec<f64> = weights.iter().zip(&grad).map(|(w, g)| w - step * g).collect();
        let candidate_bias = bias - step * grad_bias;
        let candidate_loss = objective.loss(&candidate, candidate_bias);
        let lr_used = step;
        let accepted = candidate_loss <= loss;
        let improvement = if accepted {
            let gain = loss - candidate_loss;
            weights = candidate;
            bias = candidate_bias;
            loss = candidate_loss;
            gain
        } else {
            step /= 2.0;
            0.0
        };
        history.push(EpochRecord {
            epoch,
            loss,
            learning_rate: lr_used,
            accepted,
        });
        if config.early_stopping_patience > 0 {
            stalled = if improvement < MIN_IMPROVEMENT { stalled + 1 } else { 0 };
            if stalled >= config.early_stopping_patience {
                break;
            }
        }
    }
    (weights, bias, history)
}

pub fn write_history_csv<W: Write>(history: &[EpochRecord], sink: W) -> Result<()> {
    let ctx = |e: csv::Error| Error::format("writing training history", e);
    let mut writer = csv::Writer::from_writer(sink);
    writer
        .write_record(["epoch", "loss", "learning_rate", "accepted"])
        .map_err(ctx)?;
    for r in history {
        writer
            .write_record([
                r.epoch.to_string(),
                r.loss.to_string(),
                r.learning_rate.to_string(),
                r.accepted.to_string(),
            ])
            .map_err(ctx)?;
    }
    writer
        .flush()
        .map_err(|e| Error::format("writing training history", e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::CandidateProfile;
    use rand::{Rng, SeedableRng};

    fn row(id: &str, about: &str, positive: bool) -> LabeledRow {
        LabeledRow {
            profile: CandidateProfile {
                id: id.into(),
                experience_years: 1.0,
                education: String::new(),
                skills: vec![],
                about: about.into(),
                job_title: String::new(),
                overall_score: if positive { 4 } else { 1 },
                reference_score: None,
            },
            label: if positive {
                BinaryLabel::Positive
            } else {
                BinaryLabel::Negative
            },
        }
    }

    fn separable() -> Vec<LabeledRow> {
        vec![
            row("a", "expert leader", true),
            row("b", "expert architect", true),
            row("c", "novice intern", false),
            row("d", "novice trainee", false),
        ]
    }

    #[test]
    fn vocabulary_min_count() {
        let v = fit_vocabulary(&["a b", "b c"], 2).unwrap();
        assert_eq!(v.tokens().collect::<Vec<_>>(), ["b"]);
        assert_eq!(v.get("b"), Some(0));
        let all = fit_vocabulary(&["a b", "b c"], 1).unwrap();
        assert_eq!(all.tokens().collect::<Vec<_>>(), ["a", "b", "c"]);
        assert!(fit_vocabulary(&["a b", "b c"], 3).is_err());
        assert!(fit_vocabulary::<&str>(&[], 1).is_err());
    }

    #[test]
    fn vectorize_counts() {
        let v = fit_vocabulary(&["a b"], 1).unwrap();
        assert_eq!(vectorize("b b a", &v).to_dense(2), [1.0, 2.0]);
        assert_eq!(vectorize("zzz qqq", &v).to_dense(2), [0.0, 0.0]);
        assert_eq!(vectorize("a b b", &v), vectorize("b a b", &v));
    }

    #[test]
    fn separable_corpus_fits() {
        let rows = separable();
        let config = TrainingConfig {
            epochs: 500,
            learning_rate: 0.5,
            early_stopping_patience: 0,
            ..TrainingConfig::default()
        };
        let (model, history) = train_with_history(&rows, &config).unwrap();
        for r in &rows {
            let p = model.predict_proba(&r.text());
            assert_eq!(p >= 0.5, r.label.is_positive(), "{} -> {p}", r.profile.id);
        }
        let accepted: Vec<f64> = history.iter().filter(|h| h.accepted).map(|h| h.loss).collect();
        assert!(accepted.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn one_epoch_is_one_step_from_zero() {
        let rows = separable();
        let config = TrainingConfig {
            epochs: 1,
            learning_rate: 0.01,
            ..TrainingConfig::default()
        };
        let model = train(&rows, &config).unwrap();
        let texts: Vec<String> = rows.iter().map(LabeledRow::text).collect();
        let objective = WeightedLogisticObjective::new(
            texts.iter().map(|t| vectorize(t, &model.vocabulary)).collect(),
            rows.iter().map(|r| r.label).collect(),
            config.class_weights,
            model.vocabulary.len(),
        )
        .unwrap();
        let (g, gb) = objective.gradient(&vec![0.0; objective.dim()], 0.0);
        let expected: Vec<f64> = g.iter().map(|g| -0.01 * g).collect();
        assert_eq!(model.weights, expected);
        assert_eq!(model.bias, -0.01 * gb);
        assert!(TrainingConfig { epochs: 0, ..config }.validate().is_err());
    }

    #[test]
    fn single_class_rejected() {
        let rows = vec![row("a", "x", true), row("b", "y", true)];
        assert!(matches!(train(&rows, &TrainingConfig::default()), Err(Error::SingleClass(_))));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let rows = separable();
        let texts: Vec<String> = rows.iter().map(LabeledRow::text).collect();
        let vocab = fit_vocabulary(&texts, 1).unwrap();
        let objective = WeightedLogisticObjective::new(
            texts.iter().map(|t| vectorize(t, &vocab)).collect(),
            rows.iter().map(|r| r.label).collect(),
            ClassWeights::new(2.0, 0.5).unwrap(),
            vocab.len(),
        )
        .unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let h = 1e-5;
        for _ in 0..10 {
            let w: Vec<f64> = (0..objective.dim()).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let b = rng.gen_range(-1.0..1.0);
            let (g, gb) = objective.gradient(&w, b);
            for i in 0..w.len() {
                let (mut up, mut down) = (w.clone(), w.clone());
                up[i] += h;
                down[i] -= h;
                let fd = (objective.loss(&up, b) - objective.loss(&down, b)) / (2.0 * h);
                let rel = (fd - g[i]).abs() / fd.abs().max(g[i].abs()).max(1e-8);
                assert!(rel < 1e-4, "coordinate {i}: {fd} vs {}", g[i]);
            }
            let fd = (objective.loss(&w, b + h) - objective.loss(&w, b - h)) / (2.0 * h);
            assert!((fd - gb).abs() / fd.abs().max(gb.abs()).max(1e-8) < 1e-4);
        }
    }

    #[test]
    fn doubled_weights_halved_rate_same_trajectory() {
        let rows = separable();
        let base = TrainingConfig {
            epochs: 50,
            learning_rate: 0.4,
            class_weights: ClassWeights::new(1.5, 1.5).unwrap(),
            early_stopping_patience: 0,
            ..TrainingConfig::default()
        };
        let scaled = TrainingConfig {
            learning_rate: 0.2,
            class_weights: ClassWeights::new(3.0, 3.0).unwrap(),
            ..base
        };
        let a = train(&rows, &base).unwrap();
        let b = train(&rows, &scaled).unwrap();
        assert_eq!(a.weights, b.weights);
        assert_eq!(a.bias, b.bias);
    }

    #[test]
    fn deterministic_training() {
        let rows = separable();
        let config = TrainingConfig::default();
        assert_eq!(train(&rows, &config).unwrap(), train(&rows, &config).unwrap());
    }

    #[test]
    fn probability_properties() {
        let vocab = fit_vocabulary(&["good bad"], 1).unwrap();
        let zero = LinearModel {
            weights: vec![0.0, 0.0],
            bias: 0.0,
            vocabulary: vocab.clone(),
            config: TrainingConfig::default(),
        };
        assert_eq!(zero.predict_proba("anything good"), 0.5);

        let model = LinearModel {
            weights: vec![1.3, -0.4],
            bias: 0.2,
            ..zero.clone()
        };
        let negated = LinearModel {
            weights: vec![-1.3, 0.4],
            bias: -0.2,
            ..zero.clone()
        };
        let text = "good good bad";
        assert!((model.predict_proba(text) + negated.predict_proba(text) - 1.0).abs() < 1e-12);

        let mut stronger = model.clone();
        stronger.weights[0] += 0.5;
        assert!(stronger.predict_proba(text) > model.predict_proba(text));

        let huge = LinearModel {
            weights: vec![1e6, 0.0],
            ..zero
        };
        let p = huge.predict_proba("good");
        assert!(p > 0.0 && p < 1.0);
    }

    #[test]
    fn model_json_round_trip() {
        let model = train(&separable(), &TrainingConfig::default()).unwrap();
        let again = LinearModel::from_json(&model.to_json().unwrap()).unwrap();
        assert_eq!(model, again);
    }
}
