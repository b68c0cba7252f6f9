//! Compare TOPSIS closeness scores, scaled to 0-100, against expert ratings.

use persel::validation::{validation_report, ScorePair, ValidationReport};

pub fn run_example() -> persel::Result<ValidationReport> {
    let closeness = [0.82, 0.64, 0.47, 0.91, 0.33, 0.58];
    let expert = [78.0, 70.0, 45.0, 88.0, 40.0, 52.0];
    let predicted = closeness.iter().map(|c| c * 100.0).collect();
    let pair = ScorePair::new(predicted, expert.to_vec())?;
    let report = validation_report(&pair);
    print!("{}", report.to_table());

    // A zero reference value makes MAPE undefined; the rest still report.
    let with_zero = ScorePair::new(vec![5.0, 40.0], vec![0.0, 42.0])?;
    print!("\n{}", validation_report(&with_zero).to_table());
    Ok(report)
}

fn main() -> persel::Result<()> {
    run_example().map(|_| ())
}
