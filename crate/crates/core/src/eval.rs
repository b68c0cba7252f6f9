//! Binary classifier evaluation over score files: confusion matrices,
//! support-weighted reports, ROC curves, AUC and Youden-optimal thresholds.
//!
//! A prediction counts as positive when `probability >= threshold`.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preprocess::BinaryLabel;

pub const SCORE_FILE_HEADER: [&str; 3] = ["id", "probability", "true_label"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredPrediction {
    pub id: String,
    pub probability: f64,
    pub true_label: BinaryLabel,
}

impl ScoredPrediction {
    pub fn new(id: impl Into<String>, probability: f64, true_label: BinaryLabel) -> Result<Self> {
        if !(0.0..=1.0).contains(&probability) {
            return Err(Error::range("probability", format!("{probability} not in [0, 1]")));
        }
        Ok(ScoredPrediction {
            id: id.into(),
            probability,
            true_label,
        })
    }
}

/// Reads a score file (`id,probability,true_label`). Every violating line is
/// reported, not just the first.
pub fn read_score_file<R: Read>(source: R) -> Result<Vec<ScoredPrediction>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let headers = reader
        .headers()
        .map_err(|e| Error::Contract(vec![format!("line 1: {e}")]))?
        .clone();
    if headers.iter().collect::<Vec<_>>() != SCORE_FILE_HEADER {
        return Err(Error::Contract(vec![format!(
            "line 1: header must be `{}`, got `{}`",
            SCORE_FILE_HEADER.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )]));
    }
    let mut predictions = Vec::new();
    let mut violations = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                violations.push(format!("line {line}: {e}"));
                continue;
            }
        };
        match parse_score_record(&record) {
            Ok(p) => predictions.push(p),
            Err(msg) => violations.push(format!("line {line}: {msg}")),
        }
    }
    if !violations.is_empty() {
        return Err(Error::Contract(violations));
    }
    if predictions.is_empty() {
        return Err(Error::Contract(vec!["score file has no rows".into()]));
    }
    Ok(predictions)
}

fn parse_score_record(record: &csv::StringRecord) -> std::result::Result<ScoredPrediction, String> {
    let id = record.get(0).unwrap_or("");
    if id.is_empty() {
        return Err("empty id".into());
    }
    let raw_p = record.get(1).unwrap_or("");
    let probability: f64 = raw_p
        .parse()
        .map_err(|_| format!("probability `{raw_p}` is not a number"))?;
    if !(0.0..=1.0).contains(&probability) {
        return Err(format!("probability {probability} not in [0, 1]"));
    }
    let label = match record.get(2).unwrap_or("") {
        "0" => BinaryLabel::Negative,
        "1" => BinaryLabel::Positive,
        other => return Err(format!("true_label `{other}` must be 0 or 1")),
    };
    Ok(ScoredPrediction {
        id: id.to_string(),
        probability,
        true_label: label,
    })
}

pub fn write_score_file<W: Write>(predictions: &[ScoredPrediction], sink: W) -> Result<()> {
    let ctx = |e: csv::Error| Error::format("writing score file", e);
    let mut writer = csv::Writer::from_writer(sink);
    writer.write_record(SCORE_FILE_HEADER).map_err(ctx)?;
    for p in predictions {
        writer
            .write_record([p.id.clone(), p.probability.to_string(), p.true_label.to_string()])
            .map_err(ctx)?;
    }
    writer
        .flush()
        .map_err(|e| Error::format("writing score file", e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl ConfusionMatrix {
    pub fn new(tp: usize, fp: usize, tn: usize, fn_: usize) -> Result<Self> {
        if tp + fp + tn + fn_ == 0 {
            return Err(Error::Empty("confusion matrix with no predictions".into()));
        }
        Ok(ConfusionMatrix { tp, fp, tn, fn_ })
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn positives(&self) -> usize {
        self.tp + self.fn_
    }

    pub fn negatives(&self) -> usize {
        self.tn + self.fp
    }
}

pub fn confusion_matrix(predictions: &[ScoredPrediction], threshold: f64) -> Result<ConfusionMatrix> {
    if predictions.is_empty() {
        return Err(Error::Empty("no predictions".into()));
    }
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::range("threshold", format!("{threshold} not in [0, 1]")));
    }
    let mut cm = ConfusionMatrix {
        tp: 0,
        fp: 0,
        tn: 0,
        fn_: 0,
    };
    for p in predictions {
        match (p.probability >= threshold, p.true_label.is_positive()) {
            (true, true) => cm.tp += 1,
            (true, false) => cm.fp += 1,
            (false, false) => cm.tn += 1,
            (false, true) => cm.fn_ += 1,
        }
    }
    Ok(cm)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

/// Accuracy plus per-class and support-weighted precision, recall and F1.
/// Any ratio with a zero denominator is reported as 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub accuracy: f64,
    pub negative: ClassMetrics,
    pub positive: ClassMetrics,
    pub weighted_precision: f64,
    pub weighted_recall: f64,
    pub weighted_f1: f64,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn class_metrics(correct: usize, predicted: usize, support: usize) -> ClassMetrics {
    let precision = ratio(correct, predicted);
    let recall = ratio(correct, support);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    ClassMetrics {
        precision,
        recall,
        f1,
        support,
    }
}

pub fn classification_report(cm: &ConfusionMatrix) -> ClassificationReport {
    let total = cm.total();
    let positive = class_metrics(cm.tp, cm.tp + cm.fp, cm.positives());
    let negative = class_metrics(cm.tn, cm.tn + cm.fn_, cm.negatives());
    let weighted = |f: fn(&ClassMetrics) -> f64| {
        (positive.support as f64 * f(&positive) + negative.support as f64 * f(&negative)) / total as f64
    };
    ClassificationReport {
        accuracy: ratio(cm.tp + cm.tn, total),
        negative,
        positive,
        weighted_precision: weighted(|m| m.precision),
        // support_c * recall_c is the count of correct predictions in class c.
        weighted_recall: ratio(cm.tp + cm.tn, total),
        weighted_f1: weighted(|m| m.f1),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
    /// Cut-off producing this point; `+inf` for the all-negative endpoint.
    pub threshold: f64,
    pub tp: usize,
    pub fp: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
    pub auc: f64,
    pub positives: usize,
    pub negatives: usize,
}

impl RocCurve {
    /// `fpr,tpr,threshold` rows for plotting.
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let ctx = |e: csv::Error| Error::format("writing roc points", e);
        let mut writer = csv::Writer::from_writer(sink);
        writer.write_record(["fpr", "tpr", "threshold"]).map_err(ctx)?;
        for p in &self.points {
            writer
                .write_record([p.fpr.to_string(), p.tpr.to_string(), p.threshold.to_string()])
                .map_err(ctx)?;
        }
        writer.flush().map_err(|e| Error::format("writing roc points", e))
    }
}

/// Sweeps every distinct probability as a threshold, from above the maximum
/// down to the minimum, and integrates the curve with the trapezoid rule.
pub fn roc_curve(predictions: &[ScoredPrediction]) -> Result<RocCurve> {
    let positives = predictions.iter().filter(|p| p.true_label.is_positive()).count();
    let negatives = predictions.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::SingleClass(format!(
            "ROC needs both classes, got {negatives} negatives and {positives} positives"
        )));
    }
    let mut sorted: Vec<&ScoredPrediction> = predictions.iter().collect();
    sorted.sort_by(|a, b| b.probability.total_cmp(&a.probability));

    let point = |tp: usize, fp: usize, threshold: f64| RocPoint {
        fpr: fp as f64 / negatives as f64,
        tpr: tp as f64 / positives as f64,
        threshold,
        tp,
        fp,
    };
    let mut points = vec![point(0, 0, f64::INFINITY)];
    let (mut tp, mut fp) = (0, 0);
    let mut i = 0;
    while i < sorted.len() {
        let threshold = sorted[i].probability;
        while i < sorted.len() && sorted[i].probability == threshold {
            if sorted[i].true_label.is_positive() {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(point(tp, fp, threshold));
    }

    let auc = points
        .windows(2)
        .map(|w| (w[1].fpr - w[0].fpr) * (w[0].tpr + w[1].tpr) / 2.0)
        .sum::<f64>()
        .clamp(0.0, 1.0);
    Ok(RocCurve {
        points,
        auc,
        positives,
        negatives,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdSearchResult {
    pub threshold: f64,
    pub youden_j: f64,
    pub sensitivity: f64,
    pub specificity: f64,
}

impl ThresholdSearchResult {
    fn from_rates(threshold: f64, tpr: f64, fpr: f64) -> Self {
        let sensitivity = tpr;
        let specificity = 1.0 - fpr;
        ThresholdSearchResult {
            threshold,
            youden_j: sensitivity + specificity - 1.0,
            sensitivity,
            specificity,
        }
    }

    /// Operating point at a fixed threshold.
    pub fn at(cm: &ConfusionMatrix, threshold: f64) -> Self {
        Self::from_rates(
            threshold,
            ratio(cm.tp, cm.positives()),
            ratio(cm.fp, cm.negatives()),
        )
    }
}

/// Curve point maximizing Youden's J = TPR - FPR. Equal J goes to the larger
/// threshold. The `+inf` endpoint is never selected.
pub fn optimal_threshold(curve: &RocCurve) -> Result<ThresholdSearchResult> {
    // J compared exactly as tp * N - fp * P.
    let score = |p: &RocPoint| p.tp as i128 * curve.negatives as i128 - p.fp as i128 * curve.positives as i128;
    let best = curve
        .points
        .iter()
        .filter(|p| p.threshold.is_finite())
        .max_by(|a, b| score(a).cmp(&score(b)).then(a.threshold.total_cmp(&b.threshold)))
        .ok_or_else(|| Error::Empty("ROC curve has no finite thresholds".into()))?;
    Ok(ThresholdSearchResult::from_rates(best.threshold, best.tpr, best.fpr))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelEntry {
    pub name: String,
    pub report: ClassificationReport,
    pub threshold: ThresholdSearchResult,
    pub parameter_count: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub model: String,
    pub accuracy: f64,
    pub weighted_f1: f64,
    pub weighted_precision: f64,
    pub weighted_recall: f64,
    pub threshold: f64,
    pub parameter_count: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonTable {
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:<16} {:>9} {:>8} {:>10} {:>8} {:>10} {:>12}\n",
            "model", "accuracy", "f1", "precision", "recall", "threshold", "parameters"
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{:<16} {:>9.2} {:>8.4} {:>10.4} {:>8.4} {:>10.4} {:>12}\n",
                r.model,
                r.accuracy * 100.0,
                r.weighted_f1,
                r.weighted_precision,
                r.weighted_recall,
                r.threshold,
                r.parameter_count.map_or("-".to_string(), |p| p.to_string())
            ));
        }
        out
    }

    /// `model,accuracy,f1,threshold` rows for plotting.
    pub fn write_plot_csv<W: Write>(&self, sink: W) -> Result<()> {
        let ctx = |e: csv::Error| Error::format("writing comparison plot data", e);
        let mut writer = csv::Writer::from_writer(sink);
        writer.write_record(["model", "accuracy", "f1", "threshold"]).map_err(ctx)?;
        for r in &self.rows {
            writer
                .write_record([
                    r.model.clone(),
                    r.accuracy.to_string(),
                    r.weighted_f1.to_string(),
                    r.threshold.to_string(),
                ])
                .map_err(ctx)?;
        }
        writer
            .flush()
            .map_err(|e| Error::format("writing comparison plot data", e))
    }
}

/// Rows ordered by accuracy, then weighted F1, both descending; equal rows
/// keep input order.
pub fn compare_models(entries: &[ModelEntry]) -> Result<ComparisonTable> {
    if entries.is_empty() {
        return Err(Error::Empty("no models to compare".into()));
    }
    let mut rows: Vec<ComparisonRow> = entries
        .iter()
        .map(|e| ComparisonRow {
            model: e.name.clone(),
            accuracy: e.report.accuracy,
            weighted_f1: e.report.weighted_f1,
            weighted_precision: e.report.weighted_precision,
            weighted_recall: e.report.weighted_recall,
            threshold: e.threshold.threshold,
            parameter_count: e.parameter_count,
        })
        .collect();
    rows.sort_by(|a, b| {
        b.accuracy
            .total_cmp(&a.accuracy)
            .then(b.weighted_f1.total_cmp(&a.weighted_f1))
    });
    Ok(ComparisonTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use BinaryLabel::{Negative as N, Positive as P};

    fn preds(items: &[(f64, BinaryLabel)]) -> Vec<ScoredPrediction> {
        items
            .iter()
            .enumerate()
            .map(|(i, &(p, l))| ScoredPrediction::new(format!("s{i}"), p, l).unwrap())
            .collect()
    }

    #[test]
    fn all_correct_positive() {
        let p = preds(&[(1.0, P), (1.0, P), (1.0, P)]);
        assert_eq!(confusion_matrix(&p, 0.5).unwrap(), ConfusionMatrix::new(3, 0, 0, 0).unwrap());
    }

    #[test]
    fn threshold_zero_calls_everything_positive() {
        let p = preds(&[(0.0, N), (0.3, P), (0.9, N)]);
        let cm = confusion_matrix(&p, 0.0).unwrap();
        assert_eq!((cm.fn_, cm.tn), (0, 0));
        assert!(confusion_matrix(&[], 0.5).is_err());
        assert!(confusion_matrix(&p, 1.5).is_err());
    }

    #[test]
    fn zero_denominators_give_zero() {
        let cm = ConfusionMatrix::new(0, 0, 4, 2).unwrap();
        let r = classification_report(&cm);
        assert_eq!(r.positive.precision, 0.0);
        assert_eq!(r.positive.f1, 0.0);
        assert!(r.accuracy > 0.0);
    }

    #[test]
    fn weighted_scores_from_counts() {
        let cm = ConfusionMatrix::new(12, 0, 5, 3).unwrap();
        let r = classification_report(&cm);
        assert_eq!(r.accuracy, 0.85);
        assert_eq!(r.weighted_recall, 0.85);
        // Per-class F1: positive 2*1*0.8/1.8 = 8/9, negative 2*0.625/1.625 = 10/13.
        let oracle = (15.0 * (8.0 / 9.0) + 5.0 * (10.0 / 13.0)) / 20.0;
        assert!((r.weighted_f1 - oracle).abs() < 1e-12);
        assert!((r.weighted_f1 - 0.8589).abs() < 5e-4);
        assert!((r.weighted_precision - 0.90625).abs() < 1e-12);
    }

    #[test]
    fn roc_endpoints_and_small_auc() {
        let p = preds(&[(0.9, P), (0.45, P), (0.4, N), (0.5, N)]);
        let roc = roc_curve(&p).unwrap();
        let first = roc.points.first().unwrap();
        let last = roc.points.last().unwrap();
        assert_eq!((first.fpr, first.tpr), (0.0, 0.0));
        assert_eq!((last.fpr, last.tpr), (1.0, 1.0));
        assert_eq!(roc.auc, 0.75);
        assert!(roc_curve(&preds(&[(0.2, P), (0.4, P)])).is_err());
    }

    #[test]
    fn separated_scores() {
        let p = preds(&[(0.9, P), (0.7, P), (0.2, N), (0.1, N)]);
        let roc = roc_curve(&p).unwrap();
        assert_eq!(roc.auc, 1.0);
        let best = optimal_threshold(&roc).unwrap();
        assert_eq!(best.threshold, 0.7);
        assert_eq!((best.youden_j, best.sensitivity, best.specificity), (1.0, 1.0, 1.0));
    }

    #[test]
    fn youden_tie_prefers_larger_threshold() {
        // J = 0.5 at 0.8 (tpr 0.5, fpr 0) and at 0.3 (tpr 1, fpr 0.5).
        let p = preds(&[(0.8, P), (0.6, N), (0.3, P), (0.1, N)]);
        let best = optimal_threshold(&roc_curve(&p).unwrap()).unwrap();
        assert_eq!(best.threshold, 0.8);
        assert_eq!(best.youden_j, 0.5);
    }

    #[test]
    fn comparison_order() {
        let entry = |name: &str, tp, fp, tn, fn_| {
            let cm = ConfusionMatrix::new(tp, fp, tn, fn_).unwrap();
            ModelEntry {
                name: name.into(),
                report: classification_report(&cm),
                threshold: ThresholdSearchResult::at(&cm, 0.5),
                parameter_count: None,
            }
        };
        let table = compare_models(&[entry("b", 10, 2, 5, 3), entry("a", 12, 0, 5, 3)]).unwrap();
        assert_eq!(table.rows[0].model, "a");
        assert_eq!(table.rows[0].accuracy, 0.85);
        assert_eq!(table.rows[1].accuracy, 0.75);
        assert!(compare_models(&[]).is_err());
        assert_eq!(compare_models(&[entry("x", 1, 0, 1, 0)]).unwrap().rows.len(), 1);
    }

    #[test]
    fn score_file_contract() {
        let p = preds(&[(0.25, P), (1.0, N)]);
        let mut buf = Vec::new();
        write_score_file(&p, &mut buf).unwrap();
        assert!(buf.starts_with(b"id,probability,true_label\n"));
        assert_eq!(read_score_file(buf.as_slice()).unwrap(), p);

        let bad = "id,probability,true_label\na,0.5,1\nb,1.5,0\nc,x,1\nd,0.2,2\n";
        match read_score_file(bad.as_bytes()).unwrap_err() {
            Error::Contract(v) => {
                assert_eq!(v.len(), 3);
                assert!(v[0].starts_with("line 3"));
                assert!(v[2].starts_with("line 5"));
            }
            other => panic!("unexpected {other}"),
        }
        assert!(read_score_file("id,prob,label\na,0.5,1\n".as_bytes()).is_err());
    }
}
