//! Train the class-weighted token-count scorer on synthetic profiles and
//! score the held-out rows.

use persel::baseline::{train_with_history, TrainingConfig};
use persel::eval::{classification_report, confusion_matrix};
use persel::preprocess::{compute_class_weights, train_test_split, LabeledRow};
use persel::synthetic;

pub fn run_example() -> persel::Result<f64> {
    let rows = synthetic::generate(150, 4)?
        .dataset
        .into_profiles()
        .into_iter()
        .map(LabeledRow::from_profile)
        .collect::<persel::Result<Vec<_>>>()?;
    let (train, test) = train_test_split(&rows, 0.8, 5)?;
    let config = TrainingConfig {
        class_weights: compute_class_weights(&train)?,
        ..TrainingConfig::default()
    };
    let (model, history) = train_with_history(&train, &config)?;
    let last = history.last().expect("at least one epoch");
    println!(
        "{} tokens, {} epochs, loss {:.4} -> {:.4}",
        model.vocabulary.len(),
        history.len(),
        history[0].loss,
        last.loss
    );

    let scored = model.score_rows(&test);
    for p in scored.iter().take(5) {
        println!("{:<6} p={:.3} label={}", p.id, p.probability, p.true_label);
    }
    let report = classification_report(&confusion_matrix(&scored, 0.5)?);
    println!("test accuracy {:.3}, weighted F1 {:.3}", report.accuracy, report.weighted_f1);
    Ok(report.accuracy)
}

fn main() -> persel::Result<()> {
    run_example().map(|_| ())
}
