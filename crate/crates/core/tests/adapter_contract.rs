//! Stands in for the external fine-tuning adapter: consumes the engine's
//! labeled-rows file and hands back a score file and history file.

use std::fs;

use persel::adapter::{check_adapter_output, FineTuneConfig, TransformerModel, HISTORY_HEADER};
use persel::config::{Paths, RunConfig};
use persel::eval::{write_score_file, ScoredPrediction, SCORE_FILE_HEADER};
use persel::pipeline;
use persel::preprocess::{compute_class_weights, read_labeled_rows};
use persel::synthetic;

#[test]
fn exported_files_pass_the_engine_contracts() {
    let dir = tempfile::tempdir().unwrap();
    let files = synthetic::generate(100, 8).unwrap().write_files(&dir.path().join("in")).unwrap();
    let config = RunConfig {
        out: dir.path().join("out"),
        paths: Paths {
            profiles: Some(files.profiles),
            lexicon: Some(files.lexicon),
            ..Paths::default()
        },
        ..RunConfig::default()
    };
    pipeline::cmd_preprocess(&config).unwrap();

    let train = read_labeled_rows(fs::File::open(config.out.join(pipeline::TRAIN_FILE)).unwrap()).unwrap();
    let test = read_labeled_rows(fs::File::open(config.out.join(pipeline::TEST_FILE)).unwrap()).unwrap();
    assert_eq!(test.len(), 20);

    let recipe = FineTuneConfig::new(TransformerModel::Roberta, compute_class_weights(&train).unwrap(), config.seed);
    let recipe = FineTuneConfig::from_toml(&recipe.to_toml().unwrap()).unwrap();
    assert_eq!(recipe.checkpoint().unwrap(), "roberta-base");

    // A fake model: longer self-descriptions score higher.
    let predictions: Vec<ScoredPrediction> = test
        .iter()
        .map(|r| {
            let p = (r.profile.about.len() as f64 / 100.0).min(1.0);
            ScoredPrediction::new(r.profile.id.clone(), p, r.label).unwrap()
        })
        .collect();
    let scores = dir.path().join("adapter/roberta.csv");
    fs::create_dir_all(scores.parent().unwrap()).unwrap();
    write_score_file(&predictions, fs::File::create(&scores).unwrap()).unwrap();
    let history = dir.path().join("adapter/history.csv");
    fs::write(
        &history,
        format!("{}\n1,0.69,0.65,0.55\n2,0.61,0.60,0.65\n", HISTORY_HEADER.join(",")),
    )
    .unwrap();

    let text = fs::read_to_string(&scores).unwrap();
    assert_eq!(text.lines().next().unwrap(), SCORE_FILE_HEADER.join(","));
    assert_eq!(text.lines().count(), 21);

    let (read_back, epochs) = check_adapter_output(&scores, &history).unwrap();
    assert_eq!(read_back, predictions);
    assert_eq!(epochs.len(), 2);
    assert!(read_back.iter().all(|p| (0.0..=1.0).contains(&p.probability)));

    let evaluation = pipeline::cmd_evaluate(&config, &scores).unwrap();
    assert_eq!(evaluation.model, "roberta");
    assert_eq!(evaluation.predictions, 20);
}

#[test]
fn contract_violations_name_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let scores = dir.path().join("scores.csv");
    let history = dir.path().join("history.csv");
    fs::write(&scores, "id,probability,true_label\na,0.4,1\nb,0.6,0\n").unwrap();
    fs::write(&history, "epoch,train_loss,val_loss,val_accuracy\n2,0.5,0.5,0.5\n").unwrap();
    let err = check_adapter_output(&scores, &history).unwrap_err().to_string();
    assert!(err.contains("history.csv") && err.contains("out of sequence"), "{err}");
}
