//! Build a ROC curve from scored predictions, pick the Youden-optimal
//! threshold and compare it with the default 0.5 cut-off.

use persel::eval::{
    classification_report, confusion_matrix, optimal_threshold, roc_curve, ScoredPrediction,
    ThresholdSearchResult,
};
use persel::preprocess::BinaryLabel;

pub fn run_example() -> persel::Result<ThresholdSearchResult> {
    let scores = [
        (0.95, 1), (0.85, 1), (0.70, 1), (0.60, 1), (0.52, 1),
        (0.90, 0), (0.50, 0), (0.45, 0), (0.30, 0), (0.20, 0),
    ];
    let predictions = scores
        .iter()
        .enumerate()
        .map(|(i, &(p, y))| ScoredPrediction::new(format!("s{i}"), p, BinaryLabel::try_from(y)?))
        .collect::<persel::Result<Vec<_>>>()?;

    let curve = roc_curve(&predictions)?;
    println!("{:>9} {:>5} {:>5}", "threshold", "fpr", "tpr");
    for p in &curve.points {
        println!("{:>9} {:>5.2} {:>5.2}", p.threshold, p.fpr, p.tpr);
    }
    println!("auc {:.4}", curve.auc);

    let best = optimal_threshold(&curve)?;
    println!(
        "youden-optimal threshold {} (J {:.2}, sensitivity {:.2}, specificity {:.2})",
        best.threshold, best.youden_j, best.sensitivity, best.specificity
    );
    for t in [0.5, best.threshold] {
        let report = classification_report(&confusion_matrix(&predictions, t)?);
        println!("at {t}: accuracy {:.2}, weighted F1 {:.3}", report.accuracy, report.weighted_f1);
    }
    Ok(best)
}

fn main() -> persel::Result<()> {
    run_example().map(|_| ())
}
