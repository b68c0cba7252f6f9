//! Batch commands: ingest, preprocess, rank, train-baseline, evaluate,
//! compare and report.
//!
//! Every command reads its inputs from the run config (and the output
//! directory, for artifacts of earlier steps) and writes its artifacts under
//! `config.out`. Machine-readable artifacts are pretty JSON carrying a
//! `config` echo; human-readable ones are aligned text tables. With the same
//! config and seed every artifact is byte-identical across runs.
//!
//! Output layout:
//!
//! ```text
//! dataset.csv  ingest.json
//! train.csv  test.csv  preprocess.json
//! ranking.json  ranking.txt  correlation.csv  validation.json  validation.txt
//! model.json  history.csv  scores/baseline.csv  train.json
//! eval/<name>/report.json  eval/<name>/report.txt  eval/<name>/roc.csv
//! compare.json  compare.txt  compare_plot.csv
//! report.txt
//! ```

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use ndarray::Axis;
use serde::Serialize;

use crate::baseline::{self, write_history_csv, LinearModel};
use crate::config::{RunConfig, StageOrder};
use crate::error::{Error, Result};
use crate::eval::{
    self, classification_report, compare_models, confusion_matrix, optimal_threshold, read_score_file, roc_curve,
    write_score_file, ClassificationReport, ComparisonTable, ConfusionMatrix, ModelEntry, ScoredPrediction,
    ThresholdSearchResult,
};
use crate::preprocess::{
    augment_dataset, balance_classes, compute_class_weights, label_counts, read_labeled_rows, train_test_split,
    write_labeled_rows, AugmentationConfig, ClassWeights, LabeledRow, SynonymLexicon,
};
use crate::profile::{
    encode_features, load_profiles, pearson_correlation_matrix, write_profiles, CorrelationMatrix, Dataset,
    EncodingConfig, ProfileSchema,
};
use crate::rng::{derive_seed, Stream};
use crate::topsis::{topsis, DecisionMatrix, Direction, WeightVector};
use crate::validation::{validation_report, ScorePair, ValidationReport};

pub const DATASET_FILE: &str = "dataset.csv";
pub const TRAIN_FILE: &str = "train.csv";
pub const TEST_FILE: &str = "test.csv";
pub const MODEL_FILE: &str = "model.json";
pub const BASELINE_SCORES: &str = "scores/baseline.csv";

/// Fallback decision threshold when neither an override nor a ROC curve is
/// available.
pub const DEFAULT_THRESHOLD: f64 = 0.5;

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

fn write_with<F>(path: &Path, f: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> Result<()>,
{
    let mut w = create(path)?;
    f(&mut w).map_err(|e| e.in_file(path))?;
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_with(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value).map_err(|e| Error::format("json", e))?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    write_with(path, |w| w.write_all(text.as_bytes()).map_err(|e| Error::io(path, e)))
}

/// The canonical dataset in the output directory if `ingest` has run,
/// otherwise the configured profile file.
pub fn load_dataset(config: &RunConfig) -> Result<Dataset> {
    let canonical = config.out.join(DATASET_FILE);
    let path = if canonical.exists() {
        canonical
    } else {
        config.profiles_path()?.to_path_buf()
    };
    load_profiles(open(&path)?, &ProfileSchema::default()).map_err(|e| e.in_file(&path))
}

fn labeled(dataset: &Dataset) -> Result<Vec<LabeledRow>> {
    dataset
        .profiles()
        .iter()
        .cloned()
        .map(LabeledRow::from_profile)
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct IngestSummary {
    pub rows: usize,
    pub negatives: usize,
    pub positives: usize,
    /// Profiles per overall score 0..=5.
    pub score_counts: [usize; 6],
    pub with_reference: usize,
}

#[derive(Serialize)]
struct Artifact<'a, T: Serialize> {
    config: &'a RunConfig,
    #[serde(flatten)]
    body: &'a T,
}

pub fn cmd_ingest(config: &RunConfig) -> Result<IngestSummary> {
    let path = config.profiles_path()?;
    let dataset = load_profiles(open(path)?, &ProfileSchema::default()).map_err(|e| e.in_file(path))?;
    let rows = labeled(&dataset)?;
    let (negatives, positives) = label_counts(&rows);
    let mut score_counts = [0; 6];
    for p in dataset.profiles() {
        score_counts[p.overall_score as usize] += 1;
    }
    let summary = IngestSummary {
        rows: dataset.len(),
        negatives,
        positives,
        score_counts,
        with_reference: dataset
            .profiles()
            .iter()
            .filter(|p| p.reference_score.is_some())
            .count(),
    };
    write_with(&config.out.join(DATASET_FILE), |w| write_profiles(&dataset, w))?;
    write_json(
        &config.out.join("ingest.json"),
        &Artifact {
            config,
            body: &summary,
        },
    )?;
    Ok(summary)
}

#[derive(Debug, Clone, Serialize)]
pub struct PreprocessSummary {
    pub order: StageOrder,
    pub input_rows: usize,
    pub train_rows: usize,
    pub test_rows: usize,
    pub train_counts: [usize; 2],
    pub test_counts: [usize; 2],
    pub class_weights: ClassWeights,
    pub split_seed: u64,
    pub augment_seed: u64,
    pub resample_seed: u64,
}

pub fn cmd_preprocess(config: &RunConfig) -> Result<PreprocessSummary> {
    let settings = &config.preprocess;
    let dataset = load_dataset(config)?;
    let rows = labeled(&dataset)?;
    let split_seed = derive_seed(config.seed, Stream::Split);
    let augment_seed = derive_seed(config.seed, Stream::Augment);
    let resample_seed = derive_seed(config.seed, Stream::Resample);

    let lexicon = if settings.augment {
        let path = config.lexicon_path()?;
        Some(SynonymLexicon::load(path).map_err(|e| e.in_file(path))?)
    } else {
        None
    };
    let aug_config = AugmentationConfig::new(settings.replacement_fraction, augment_seed)?;
    let enlarge = |rows: Vec<LabeledRow>| -> Result<Vec<LabeledRow>> {
        let rows = match &lexicon {
            Some(lex) => augment_dataset(&rows, lex, &aug_config)?,
            None => rows,
        };
        if settings.balance {
            balance_classes(&rows, resample_seed)
        } else {
            Ok(rows)
        }
    };

    let (train, test) = match settings.order {
        StageOrder::SplitFirst => {
            let (train, test) = train_test_split(&rows, settings.train_fraction, split_seed)?;
            (enlarge(train)?, test)
        }
        StageOrder::AugmentFirst => train_test_split(&enlarge(rows.clone())?, settings.train_fraction, split_seed)?,
    };
    let class_weights = compute_class_weights(&train)?;

    write_with(&config.out.join(TRAIN_FILE), |w| write_labeled_rows(&train, w))?;
    write_with(&config.out.join(TEST_FILE), |w| write_labeled_rows(&test, w))?;
    let counts = |r: &[LabeledRow]| {
        let (n, p) = label_counts(r);
        [n, p]
    };
    let summary = PreprocessSummary {
        order: settings.order,
        input_rows: rows.len(),
        train_rows: train.len(),
        test_rows: test.len(),
        train_counts: counts(&train),
        test_counts: counts(&test),
        class_weights,
        split_seed,
        augment_seed,
        resample_seed,
    };
    write_json(
        &config.out.join("preprocess.json"),
        &Artifact {
            config,
            body: &summary,
        },
    )?;
    Ok(summary)
}

#[derive(Debug, Clone, Serialize)]
pub struct RankedCandidate {
    pub id: String,
    pub rank: usize,
    pub closeness: f64,
    pub s_plus: f64,
    pub s_minus: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_score: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RankSummary {
    pub criteria: Vec<String>,
    pub weights: Vec<f64>,
    pub normalized_weights: Vec<f64>,
    pub directions: Vec<Direction>,
    /// Candidates in input order.
    pub candidates: Vec<RankedCandidate>,
    /// Candidate ids, best first.
    pub ranking: Vec<String>,
    /// How the validated vectors were formed, when reference scores exist.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation_vectors: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correlation_skipped: Option<String>,
}

impl RankSummary {
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "criteria: {}\nweights:  {}\n\n{:>4}  {:<12} {:>10} {:>10} {:>10}\n",
            self.criteria
                .iter()
                .zip(&self.directions)
                .map(|(c, d)| format!("{c} ({d})"))
                .collect::<Vec<_>>()
                .join(", "),
            self.normalized_weights
                .iter()
                .map(|w| format!("{w:.4}"))
                .collect::<Vec<_>>()
                .join(", "),
            "rank",
            "candidate",
            "closeness",
            "S+",
            "S-"
        );
        let mut ordered: Vec<&RankedCandidate> = self.candidates.iter().collect();
        ordered.sort_by_key(|c| c.rank);
        for c in ordered {
            out.push_str(&format!(
                "{:>4}  {:<12} {:>10.6} {:>10.6} {:>10.6}\n",
                c.rank, c.id, c.closeness, c.s_plus, c.s_minus
            ));
        }
        out
    }
}

fn write_correlation_csv<W: Write>(c: &CorrelationMatrix, sink: W) -> Result<()> {
    let ctx = |e: csv::Error| Error::format("writing correlation matrix", e);
    let mut writer = csv::Writer::from_writer(sink);
    let mut header = vec![String::new()];
    header.extend(c.names.iter().cloned());
    writer.write_record(&header).map_err(ctx)?;
    for (name, row) in c.names.iter().zip(c.values.axis_iter(Axis(0))) {
        let mut cells = vec![name.clone()];
        cells.extend(row.iter().map(|v| v.to_string()));
        writer.write_record(&cells).map_err(ctx)?;
    }
    writer
        .flush()
        .map_err(|e| Error::format("writing correlation matrix", e))
}

pub fn cmd_rank(config: &RunConfig) -> Result<RankSummary> {
    let dataset = load_dataset(config)?;
    let encoding_path = config.encoding_path()?;
    let encoding = EncodingConfig::load(encoding_path).map_err(|e| e.in_file(encoding_path))?;
    let features = encode_features(&dataset, &encoding)?;

    let criteria: Vec<String> = match &config.rank.criteria {
        Some(c) => c.clone(),
        None => features
            .columns
            .iter()
            .filter(|c| c.as_str() != "overall_score")
            .cloned()
            .collect(),
    };
    let columns: Vec<usize> = criteria
        .iter()
        .map(|c| {
            features
                .column_index(c)
                .ok_or_else(|| Error::Config(format!("rank criterion `{c}` is not an encoded feature")))
        })
        .collect::<Result<_>>()?;
    let values = features.values.select(Axis(1), &columns);
    let decision = DecisionMatrix::new(values, criteria.clone(), features.row_ids.clone())?;

    let weights = match &config.rank.weights {
        Some(w) => WeightVector::new(w.clone())?,
        None => WeightVector::equal(criteria.len()),
    };
    if weights.len() != criteria.len() {
        return Err(Error::Config(format!(
            "{} rank weights for {} criteria",
            weights.len(),
            criteria.len()
        )));
    }
    let directions = config
        .rank
        .directions
        .clone()
        .unwrap_or_else(|| vec![Direction::Benefit; criteria.len()]);
    if directions.len() != criteria.len() {
        return Err(Error::Config(format!(
            "{} rank directions for {} criteria",
            directions.len(),
            criteria.len()
        )));
    }

    let result = topsis(&decision, &weights, &directions)?;
    let positions = result.positions();
    let candidates: Vec<RankedCandidate> = dataset
        .profiles()
        .iter()
        .enumerate()
        .map(|(i, p)| RankedCandidate {
            id: p.id.clone(),
            rank: positions[i],
            closeness: result.closeness[i],
            s_plus: result.s_plus[i],
            s_minus: result.s_minus[i],
            reference_score: p.reference_score,
        })
        .collect();

    let references: Option<Vec<f64>> = dataset.profiles().iter().map(|p| p.reference_score).collect();
    let scale = config.rank.reference_scale;
    let (validation_vectors, validation) = match references {
        Some(reference) => {
            let predicted = result.closeness.iter().map(|c| c * scale).collect();
            let pair = ScorePair::new(predicted, reference)?;
            (
                Some(format!("predicted = closeness x {scale}; reference = reference_score column")),
                Some(validation_report(&pair)),
            )
        }
        None => (None, None),
    };

    let correlation_skipped = match pearson_correlation_matrix(&features) {
        Ok(c) => {
            write_with(&config.out.join("correlation.csv"), |w| write_correlation_csv(&c, w))?;
            None
        }
        Err(e) => Some(e.to_string()),
    };

    let summary = RankSummary {
        criteria,
        normalized_weights: weights.normalized(),
        weights: weights.raw().to_vec(),
        directions,
        ranking: result.ranked_ids().into_iter().map(str::to_string).collect(),
        candidates,
        validation_vectors,
        validation,
        correlation_skipped,
    };
    write_json(
        &config.out.join("ranking.json"),
        &Artifact {
            config,
            body: &summary,
        },
    )?;
    write_text(&config.out.join("ranking.txt"), &summary.to_table())?;
    if let Some(v) = &summary.validation {
        write_json(
            &config.out.join("validation.json"),
            &Artifact { config, body: v },
        )?;
        write_text(&config.out.join("validation.txt"), &v.to_table())?;
    }
    Ok(summary)
}

#[derive(Debug, Clone, Serialize)]
pub struct TrainSummary {
    pub vocabulary_size: usize,
    pub epochs_run: usize,
    pub final_loss: f64,
    pub class_weights: ClassWeights,
    pub train_rows: usize,
    pub test_rows: usize,
    pub train_accuracy: f64,
    pub test_accuracy: f64,
    /// Accuracy of always predicting the test set's majority class.
    pub majority_baseline: f64,
    pub score_file: String,
}

fn accuracy_at(predictions: &[ScoredPrediction], threshold: f64) -> Result<f64> {
    Ok(classification_report(&confusion_matrix(predictions, threshold)?).accuracy)
}

pub fn cmd_train_baseline(config: &RunConfig) -> Result<TrainSummary> {
    let train_path = config.out.join(TRAIN_FILE);
    let test_path = config.out.join(TEST_FILE);
    let train = read_labeled_rows(open(&train_path)?).map_err(|e| e.in_file(&train_path))?;
    let test = read_labeled_rows(open(&test_path)?).map_err(|e| e.in_file(&test_path))?;
    let class_weights = if config.train.class_weights {
        compute_class_weights(&train)?
    } else {
        ClassWeights::uniform()
    };
    let training = config.train.training_config(class_weights, config.seed);
    let (model, history) = baseline::train_with_history(&train, &training)?;

    let train_scores = model.score_rows(&train);
    let test_scores = model.score_rows(&test);
    let (neg, pos) = label_counts(&test);
    let summary = TrainSummary {
        vocabulary_size: model.vocabulary.len(),
        epochs_run: history.len(),
        final_loss: history.last().map_or(f64::NAN, |h| h.loss),
        class_weights,
        train_rows: train.len(),
        test_rows: test.len(),
        train_accuracy: accuracy_at(&train_scores, DEFAULT_THRESHOLD)?,
        test_accuracy: accuracy_at(&test_scores, DEFAULT_THRESHOLD)?,
        majority_baseline: neg.max(pos) as f64 / test.len().max(1) as f64,
        score_file: BASELINE_SCORES.into(),
    };
    write_with(&config.out.join(MODEL_FILE), |w| model.save(w))?;
    write_with(&config.out.join("history.csv"), |w| write_history_csv(&history, w))?;
    write_with(&config.out.join(BASELINE_SCORES), |w| write_score_file(&test_scores, w))?;
    write_json(
        &config.out.join("train.json"),
        &Artifact {
            config,
            body: &summary,
        },
    )?;
    Ok(summary)
}

/// Scores a labeled-rows file with a saved model.
pub fn score_with_model(model_path: &Path, rows_path: &Path) -> Result<Vec<ScoredPrediction>> {
    let model = LinearModel::load(model_path).map_err(|e| e.in_file(model_path))?;
    let rows = read_labeled_rows(open(rows_path)?).map_err(|e| e.in_file(rows_path))?;
    Ok(model.score_rows(&rows))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdSource {
    Override,
    YoudenOptimal,
    Default,
}

#[derive(Debug, Clone, Serialize)]
pub struct RocSummary {
    pub auc: f64,
    pub optimal: ThresholdSearchResult,
    pub points: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Evaluation {
    pub model: String,
    pub predictions: usize,
    pub positives: usize,
    pub negatives: usize,
    pub threshold: f64,
    pub threshold_source: ThresholdSource,
    pub operating_point: ThresholdSearchResult,
    pub confusion_matrix: ConfusionMatrix,
    pub report: ClassificationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roc: Option<RocSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roc_skipped: Option<String>,
}

impl Evaluation {
    pub fn to_table(&self) -> String {
        let cm = &self.confusion_matrix;
        let r = &self.report;
        let mut out = format!(
            "model: {}\nthreshold: {} ({})\n\n              pred 0  pred 1\n  actual 0 {:>9} {:>7}\n  actual 1 {:>9} {:>7}\n\n",
            self.model,
            self.threshold,
            match self.threshold_source {
                ThresholdSource::Override => "override",
                ThresholdSource::YoudenOptimal => "youden-optimal",
                ThresholdSource::Default => "default",
            },
            cm.tn,
            cm.fp,
            cm.fn_,
            cm.tp
        );
        out.push_str(&format!(
            "{:<10} {:>10} {:>8} {:>8} {:>8}\n",
            "class", "precision", "recall", "f1", "support"
        ));
        for (name, m) in [("0", &r.negative), ("1", &r.positive)] {
            out.push_str(&format!(
                "{:<10} {:>10.4} {:>8.4} {:>8.4} {:>8}\n",
                name, m.precision, m.recall, m.f1, m.support
            ));
        }
        out.push_str(&format!(
            "{:<10} {:>10.4} {:>8.4} {:>8.4} {:>8}\n\naccuracy: {:.4}\n",
            "weighted", r.weighted_precision, r.weighted_recall, r.weighted_f1, self.predictions, r.accuracy
        ));
        match (&self.roc, &self.roc_skipped) {
            (Some(roc), _) => out.push_str(&format!(
                "auc: {:.4}\nyouden-optimal threshold: {} (J = {:.4})\n",
                roc.auc, roc.optimal.threshold, roc.optimal.youden_j
            )),
            (None, Some(reason)) => out.push_str(&format!("roc skipped: {reason}\n")),
            _ => {}
        }
        out
    }
}

/// Evaluates predictions at the override threshold, or the Youden-optimal
/// one when no override is given.
pub fn evaluate_predictions(
    model: &str,
    predictions: &[ScoredPrediction],
    threshold_override: Option<f64>,
) -> Result<(Evaluation, Option<eval::RocCurve>)> {
    let (roc, roc_skipped) = match roc_curve(predictions) {
        Ok(curve) => (Some(curve), None),
        Err(e @ Error::SingleClass(_)) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let optimal = roc.as_ref().map(optimal_threshold).transpose()?;
    let (threshold, source) = match (threshold_override, &optimal) {
        (Some(t), _) => (t, ThresholdSource::Override),
        (None, Some(o)) => (o.threshold, ThresholdSource::YoudenOptimal),
        (None, None) => (DEFAULT_THRESHOLD, ThresholdSource::Default),
    };
    let cm = confusion_matrix(predictions, threshold)?;
    let evaluation = Evaluation {
        model: model.to_string(),
        predictions: predictions.len(),
        positives: cm.positives(),
        negatives: cm.negatives(),
        threshold,
        threshold_source: source,
        operating_point: match (source, optimal) {
            (ThresholdSource::YoudenOptimal, Some(o)) => o,
            _ => ThresholdSearchResult::at(&cm, threshold),
        },
        confusion_matrix: cm,
        report: classification_report(&cm),
        roc: roc.as_ref().zip(optimal).map(|(c, o)| RocSummary {
            auc: c.auc,
            optimal: o,
            points: c.points.len(),
        }),
        roc_skipped,
    };
    Ok((evaluation, roc))
}

pub fn model_name(score_file: &Path) -> String {
    score_file
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "model".into())
}

fn read_scores(path: &Path) -> Result<Vec<ScoredPrediction>> {
    read_score_file(open(path)?).map_err(|e| e.in_file(path))
}

pub fn cmd_evaluate(config: &RunConfig, score_file: &Path) -> Result<Evaluation> {
    let predictions = read_scores(score_file)?;
    let name = model_name(score_file);
    let (evaluation, roc) = evaluate_predictions(&name, &predictions, config.evaluate.threshold)?;
    let dir = config.out.join("eval").join(&name);
    write_json(
        &dir.join("report.json"),
        &Artifact {
            config,
            body: &evaluation,
        },
    )?;
    write_text(&dir.join("report.txt"), &evaluation.to_table())?;
    if let Some(roc) = roc {
        write_with(&dir.join("roc.csv"), |w| roc.write_csv(w))?;
    }
    Ok(evaluation)
}

pub fn cmd_compare(config: &RunConfig, score_files: &[PathBuf]) -> Result<ComparisonTable> {
    let files = if score_files.is_empty() {
        &config.paths.scores
    } else {
        score_files
    };
    let mut entries = Vec::with_capacity(files.len());
    for path in files {
        let predictions = read_scores(path)?;
        let name = model_name(path);
        let (evaluation, _) =
            evaluate_predictions(&name, &predictions, config.evaluate.threshold).map_err(|e| e.in_file(path))?;
        entries.push(ModelEntry {
            parameter_count: config.evaluate.parameter_counts.get(&name).copied(),
            name,
            report: evaluation.report,
            threshold: evaluation.operating_point,
        });
    }
    let table = compare_models(&entries)?;
    write_json(
        &config.out.join("compare.json"),
        &Artifact {
            config,
            body: &table,
        },
    )?;
    write_text(&config.out.join("compare.txt"), &table.to_table())?;
    write_with(&config.out.join("compare_plot.csv"), |w| table.write_plot_csv(w))?;
    Ok(table)
}

/// Collects the human-readable artifacts present in the output directory
/// into `report.txt`.
pub fn cmd_report(config: &RunConfig) -> Result<PathBuf> {
    let out = &config.out;
    let mut sections: Vec<(String, String)> = Vec::new();
    let read = |p: &Path| fs::read_to_string(p).map_err(|e| Error::io(p, e));

    if out.join("ingest.json").exists() {
        let v: serde_json::Value = serde_json::from_str(&read(&out.join("ingest.json"))?)
            .map_err(|e| Error::format("ingest.json", e))?;
        sections.push((
            "dataset".into(),
            format!(
                "rows: {}\nnegative (0-2): {}\npositive (3-5): {}\n",
                v["rows"], v["negatives"], v["positives"]
            ),
        ));
    }
    for (title, file) in [
        ("TOPSIS ranking", "ranking.txt"),
        ("ranking validation", "validation.txt"),
    ] {
        let p = out.join(file);
        if p.exists() {
            sections.push((title.into(), read(&p)?));
        }
    }
    let eval_dir = out.join("eval");
    if eval_dir.is_dir() {
        let mut names: Vec<PathBuf> = fs::read_dir(&eval_dir)
            .map_err(|e| Error::io(&eval_dir, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.join("report.txt").exists())
            .collect();
        names.sort();
        for dir in names {
            sections.push((
                format!("evaluation: {}", model_name(&dir)),
                read(&dir.join("report.txt"))?,
            ));
        }
    }
    let compare = out.join("compare.txt");
    if compare.exists() {
        sections.push(("model comparison".into(), read(&compare)?));
    }
    if sections.is_empty() {
        return Err(Error::Empty(format!("no artifacts found in {}", out.display())));
    }
    let mut text = String::new();
    for (title, body) in sections {
        text.push_str(&format!("== {title} ==\n{body}\n"));
    }
    let path = out.join("report.txt");
    write_text(&path, &text)?;
    Ok(path)
}
