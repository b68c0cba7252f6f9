//! Run every batch command on a synthetic corpus in a temporary directory,
//! the same sequence the `persel` binary exposes.

use std::path::PathBuf;

use persel::config::{Paths, RunConfig};
use persel::pipeline;
use persel::synthetic;

pub fn run_example() -> persel::Result<String> {
    let dir = tempfile::tempdir().map_err(|e| persel::Error::Config(e.to_string()))?;
    let files = synthetic::generate(100, 42)?.write_files(&dir.path().join("input"))?;

    let mut config = RunConfig {
        out: dir.path().join("out"),
        paths: Paths {
            profiles: Some(files.profiles),
            encoding: Some(files.encoding),
            lexicon: Some(files.lexicon),
            ..Paths::default()
        },
        ..RunConfig::default()
    };
    config.evaluate.parameter_counts.insert("baseline".into(), 0);

    let ingest = pipeline::cmd_ingest(&config)?;
    println!("ingested {} profiles ({} negative, {} positive)", ingest.rows, ingest.negatives, ingest.positives);
    let prep = pipeline::cmd_preprocess(&config)?;
    println!("train {} rows {:?}, test {} rows", prep.train_rows, prep.train_counts, prep.test_rows);
    let rank = pipeline::cmd_rank(&config)?;
    println!("top candidate: {}", rank.ranking[0]);
    let train = pipeline::cmd_train_baseline(&config)?;
    println!(
        "baseline test accuracy {:.3} (majority class {:.3})",
        train.test_accuracy, train.majority_baseline
    );
    let scores: PathBuf = config.out.join(pipeline::BASELINE_SCORES);
    pipeline::cmd_evaluate(&config, &scores)?;
    pipeline::cmd_compare(&config, &[scores])?;
    let report_path = pipeline::cmd_report(&config)?;
    let report = std::fs::read_to_string(&report_path).map_err(|e| persel::Error::Config(e.to_string()))?;
    println!("\n{report}");
    Ok(report)
}

fn main() -> persel::Result<()> {
    run_example().map(|_| ())
}
