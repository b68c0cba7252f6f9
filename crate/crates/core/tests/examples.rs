//! Runs every example's `run_example` so the examples stay working.

#[allow(dead_code)]
#[path = "../examples/topsis_ranking.rs"]
mod topsis_ranking;
#[allow(dead_code)]
#[path = "../examples/ranking_validation.rs"]
mod ranking_validation;
#[allow(dead_code)]
#[path = "../examples/feature_correlation.rs"]
mod feature_correlation;
#[allow(dead_code)]
#[path = "../examples/preprocessing.rs"]
mod preprocessing;
#[allow(dead_code)]
#[path = "../examples/baseline_scorer.rs"]
mod baseline_scorer;
#[allow(dead_code)]
#[path = "../examples/roc_threshold.rs"]
mod roc_threshold;
#[allow(dead_code)]
#[path = "../examples/model_comparison.rs"]
mod model_comparison;
#[allow(dead_code)]
#[path = "../examples/full_pipeline.rs"]
mod full_pipeline;

#[test]
fn topsis_ranking_runs() {
    let closeness = topsis_ranking::run_example().unwrap();
    assert_eq!(closeness.len(), 3);
    assert!(closeness[2] > closeness[0] && closeness[0] > closeness[1]);
}

#[test]
fn ranking_validation_runs() {
    let report = ranking_validation::run_example().unwrap();
    assert!((report.get("rmse").unwrap() - 5.0).abs() < 1e-12);
}

#[test]
fn feature_correlation_runs() {
    let corr = feature_correlation::run_example().unwrap();
    assert_eq!(corr.names.len(), 6);
}

#[test]
fn preprocessing_runs() {
    let weights = preprocessing::run_example().unwrap();
    assert!(weights.negative > weights.positive);
}

#[test]
fn baseline_scorer_runs() {
    assert!(baseline_scorer::run_example().unwrap() > 0.6);
}

#[test]
fn roc_threshold_runs() {
    assert_eq!(roc_threshold::run_example().unwrap().threshold, 0.52);
}

#[test]
fn model_comparison_runs() {
    let table = model_comparison::run_example().unwrap();
    assert_eq!(table.rows.len(), 3);
    assert_eq!(table.rows[0].model, "large");
}

#[test]
fn full_pipeline_runs() {
    let report = full_pipeline::run_example().unwrap();
    assert!(report.contains("TOPSIS ranking"));
}
