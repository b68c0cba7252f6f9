//! Rank three candidates on experience (benefit), skills (benefit) and
//! expected salary (cost), printing every intermediate stage.

use ndarray::array;
use persel::topsis::{
    apply_weights, closeness_and_rank, ideal_points, normalize_matrix, separation_distances, DecisionMatrix,
    Direction, WeightVector,
};

pub fn run_example() -> persel::Result<Vec<f64>> {
    let decision = DecisionMatrix::new(
        array![[7.0, 9.0, 9.0], [8.0, 7.0, 8.0], [9.0, 6.0, 8.0]],
        vec!["experience".into(), "skills".into(), "salary".into()],
        vec!["ana".into(), "ben".into(), "cai".into()],
    )?;
    let weights = WeightVector::new(vec![0.5, 0.3, 0.2])?;
    let directions = [Direction::Benefit, Direction::Benefit, Direction::Cost];

    let normalized = normalize_matrix(&decision)?;
    println!("normalized:\n{normalized:.4}");
    let weighted = apply_weights(&normalized, &weights)?;
    println!("weighted:\n{weighted:.4}");
    let ideals = ideal_points(&weighted, &directions)?;
    println!("ideal best  {:.4?}\nideal worst {:.4?}", ideals.best, ideals.worst);
    let (s_plus, s_minus) = separation_distances(&weighted, &ideals)?;
    let result = closeness_and_rank(&s_plus, &s_minus, decision.candidates())?;

    println!("\n{:<6} {:>8} {:>8} {:>9} {:>5}", "id", "S+", "S-", "closeness", "rank");
    for (i, position) in result.positions().into_iter().enumerate() {
        println!(
            "{:<6} {:>8.4} {:>8.4} {:>9.4} {:>5}",
            result.candidate_ids[i], result.s_plus[i], result.s_minus[i], result.closeness[i], position
        );
    }
    println!("order: {}", result.ranked_ids().join(" > "));
    Ok(result.closeness)
}

fn main() -> persel::Result<()> {
    run_example().map(|_| ())
}
