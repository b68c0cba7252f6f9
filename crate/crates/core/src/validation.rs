//! Agreement metrics between TOPSIS output and expert reference values.

use serde::Serialize;

use crate::error::{Error, Result};

/// Predicted and reference values for the same candidates, in the same order.
#[derive(Debug, Clone, PartialEq)]
pub struct ScorePair {
    predicted: Vec<f64>,
    reference: Vec<f64>,
}

impl ScorePair {
    pub fn new(predicted: Vec<f64>, reference: Vec<f64>) -> Result<Self> {
        if predicted.len() != reference.len() {
            return Err(Error::Shape(format!(
                "{} predicted vs {} reference values",
                predicted.len(),
                reference.len()
            )));
        }
        if predicted.is_empty() {
            return Err(Error::Empty("score pair has no values".into()));
        }
        if predicted.iter().chain(&reference).any(|v| !v.is_finite()) {
            return Err(Error::range("score pair", "all values must be finite"));
        }
        Ok(ScorePair {
            predicted,
            reference,
        })
    }

    pub fn predicted(&self) -> &[f64] {
        &self.predicted
    }

    pub fn reference(&self) -> &[f64] {
        &self.reference
    }

    pub fn len(&self) -> usize {
        self.predicted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.predicted.is_empty()
    }

    /// The same pair with the roles of the two vectors exchanged.
    pub fn swapped(&self) -> Self {
        ScorePair {
            predicted: self.reference.clone(),
            reference: self.predicted.clone(),
        }
    }

    fn diffs(&self) -> impl Iterator<Item = f64> + '_ {
        self.predicted.iter().zip(&self.reference).map(|(p, r)| p - r)
    }
}

pub fn rmse(pair: &ScorePair) -> f64 {
    (pair.diffs().map(|d| d * d).sum::<f64>() / pair.len() as f64).sqrt()
}

pub fn mae(pair: &ScorePair) -> f64 {
    manhattan_distance(pair) / pair.len() as f64
}

/// Mean absolute percentage error against the reference, in percent.
pub fn mape(pair: &ScorePair) -> Result<f64> {
    if let Some(i) = pair.reference.iter().position(|&r| r == 0.0) {
        return Err(Error::ZeroReference(i));
    }
    let sum: f64 = pair
        .diffs()
        .zip(&pair.reference)
        .map(|(d, r)| d.abs() / r.abs())
        .sum();
    Ok(100.0 * sum / pair.len() as f64)
}

pub fn manhattan_distance(pair: &ScorePair) -> f64 {
    pair.diffs().map(f64::abs).sum()
}

pub fn cosine_similarity(pair: &ScorePair) -> Result<f64> {
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (np, nr) = (norm(&pair.predicted), norm(&pair.reference));
    if np == 0.0 {
        return Err(Error::ZeroNorm("predicted".into()));
    }
    if nr == 0.0 {
        return Err(Error::ZeroNorm("reference".into()));
    }
    let dot: f64 = pair.predicted.iter().zip(&pair.reference).map(|(p, r)| p * r).sum();
    Ok((dot / (np * nr)).clamp(-1.0, 1.0))
}

/// RMSE divided by the reference range (max - min).
pub fn normalized_rmse(pair: &ScorePair) -> Result<f64> {
    let max = pair.reference.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = pair.reference.iter().copied().fold(f64::INFINITY, f64::min);
    if !(max > min) {
        return Err(Error::ConstantReference);
    }
    Ok(rmse(pair) / (max - min))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricEntry {
    pub name: &'static str,
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unavailable: Option<String>,
    pub definition: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub count: usize,
    pub metrics: Vec<MetricEntry>,
}

pub const METRIC_NAMES: [&str; 6] = [
    "rmse",
    "mae",
    "mape",
    "manhattan",
    "cosine",
    "normalized_rmse",
];

impl ValidationReport {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|m| m.name == name)?.value
    }

    /// Human-readable aligned table.
    pub fn to_table(&self) -> String {
        let mut out = format!("{:<16} {:>14}\n", "metric", "value");
        for m in &self.metrics {
            let value = match (&m.value, &m.unavailable) {
                (Some(v), _) => format!("{v:.4}"),
                (None, Some(reason)) => format!("n/a ({reason})"),
                (None, None) => "n/a".into(),
            };
            out.push_str(&format!("{:<16} {:>14}\n", m.name, value));
        }
        out
    }
}

/// All six metrics; a metric whose precondition fails is reported as
/// unavailable with the reason instead of failing the report.
pub fn validation_report(pair: &ScorePair) -> ValidationReport {
    let entry = |name, definition, result: Result<f64>| match result {
        Ok(v) => MetricEntry {
            name,
            value: Some(v),
            unavailable: None,
            definition,
        },
        Err(e) => MetricEntry {
            name,
            value: None,
            unavailable: Some(e.to_string()),
            definition,
        },
    };
    ValidationReport {
        count: pair.len(),
        metrics: vec![
            entry("rmse", "sqrt(mean((p - r)^2))", Ok(rmse(pair))),
            entry("mae", "mean(|p - r|)", Ok(mae(pair))),
            entry("mape", "100 * mean(|p - r| / |r|), anchored on reference", mape(pair)),
            entry("manhattan", "sum(|p - r|)", Ok(manhattan_distance(pair))),
            entry("cosine", "(p . r) / (|p| |r|)", cosine_similarity(pair)),
            entry(
                "normalized_rmse",
                "rmse / (max(r) - min(r)), reference range divisor",
                normalized_rmse(pair),
            ),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pair(p: &[f64], r: &[f64]) -> ScorePair {
        ScorePair::new(p.to_vec(), r.to_vec()).unwrap()
    }

    #[test]
    fn hand_computed_values() {
        assert_eq!(rmse(&pair(&[1.0, 2.0], &[1.0, 2.0])), 0.0);
        assert!((rmse(&pair(&[0.0, 0.0], &[3.0, 4.0])) - 12.5f64.sqrt()).abs() < 1e-15);
        assert!((rmse(&pair(&[0.0, 0.0], &[3.0, 4.0])) - 3.53553).abs() < 1e-5);
        assert_eq!(rmse(&pair(&[5.0], &[2.0])), 3.0);
        assert_eq!(mae(&pair(&[1.0, 3.0], &[2.0, 1.0])), 1.5);
        assert!((mape(&pair(&[100.0], &[97.0])).unwrap() - 300.0 / 97.0).abs() < 1e-12);
        assert!((mape(&pair(&[100.0], &[97.0])).unwrap() - 3.0928).abs() < 5e-5);
        assert_eq!(manhattan_distance(&pair(&[1.0, 2.0], &[4.0, 6.0])), 7.0);
        assert_eq!(cosine_similarity(&pair(&[1.0, 0.0], &[0.0, 1.0])).unwrap(), 0.0);
        assert!((cosine_similarity(&pair(&[1.0, 2.0], &[2.0, 1.0])).unwrap() - 0.8).abs() < 1e-15);
        assert!((cosine_similarity(&pair(&[3.0, 4.0], &[3.0, 4.0])).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn normalized_rmse_uses_reference_range() {
        // Reference range 49.79 scales an RMSE of 7.503 to about 0.1507.
        let reference = [0.0, 49.79];
        let p = pair(&[7.503, 49.79 - 7.503], &reference);
        assert!((rmse(&p) - 7.503).abs() < 1e-12);
        assert!((normalized_rmse(&p).unwrap() - 0.1507).abs() < 5e-5);
        assert!(matches!(normalized_rmse(&pair(&[1.0, 2.0], &[3.0, 3.0])), Err(Error::ConstantReference)));
    }

    #[test]
    fn precondition_errors() {
        assert!(matches!(mape(&pair(&[1.0, 1.0], &[2.0, 0.0])), Err(Error::ZeroReference(1))));
        assert!(cosine_similarity(&pair(&[0.0, 0.0], &[1.0, 2.0])).is_err());
        assert!(ScorePair::new(vec![], vec![]).is_err());
        assert!(ScorePair::new(vec![1.0], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn report_for_identical_vectors() {
        let report = validation_report(&pair(&[1.0, 2.0, 4.0], &[1.0, 2.0, 4.0]));
        let names: Vec<_> = report.metrics.iter().map(|m| m.name).collect();
        assert_eq!(names, METRIC_NAMES);
        for name in ["rmse", "mae", "mape", "manhattan", "normalized_rmse"] {
            assert_eq!(report.get(name), Some(0.0), "{name}");
        }
        assert!((report.get("cosine").unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn report_marks_unavailable_metric() {
        let report = validation_report(&pair(&[1.0, 2.0], &[0.0, 3.0]));
        let mape = report.metrics.iter().find(|m| m.name == "mape").unwrap();
        assert!(mape.value.is_none());
        assert!(mape.unavailable.as_deref().unwrap().contains("index 0"));
        assert!(report.get("rmse").is_some());
        assert!(report.to_table().contains("n/a"));
    }

    #[test]
    fn reference_anchored_metrics_are_asymmetric() {
        let p = pair(&[2.0, 4.0], &[1.0, 5.0]);
        let q = p.swapped();
        assert_eq!(rmse(&p), rmse(&q));
        assert_eq!(mae(&p), mae(&q));
        assert_eq!(manhattan_distance(&p), manhattan_distance(&q));
        assert_ne!(mape(&p).unwrap(), mape(&q).unwrap());
        assert_ne!(normalized_rmse(&p).unwrap(), normalized_rmse(&q).unwrap());
    }

    fn pairs() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (1usize..30).prop_flat_map(|m| {
            (
                prop::collection::vec(-100.0f64..100.0, m),
                prop::collection::vec(-100.0f64..100.0, m),
            )
        })
    }

    proptest! {
        #[test]
        fn error_identities((p, r) in pairs()) {
            let pr = pair(&p, &r);
            let m = pr.len() as f64;
            prop_assert!(mae(&pr) <= rmse(&pr) + 1e-12);
            prop_assert!(rmse(&pr) <= m.sqrt() * mae(&pr) + 1e-9);
            prop_assert!((manhattan_distance(&pr) - m * mae(&pr)).abs() < 1e-9);
            prop_assert_eq!(rmse(&pr) == 0.0, p == r);
        }

        #[test]
        fn cosine_scale_invariant((p, r) in pairs(), k in 0.01f64..100.0) {
            let base = pair(&p, &r);
            let scaled = pair(&p.iter().map(|v| v * k).collect::<Vec<_>>(), &r);
            if let (Ok(a), Ok(b)) = (cosine_similarity(&base), cosine_similarity(&scaled)) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
