//! Label, split, augment and balance a small synthetic corpus, then derive
//! class weights from the training portion.

use persel::preprocess::{
    augment_dataset, augment_with_synonyms, balance_classes, compute_class_weights, label_counts,
    train_test_split, AugmentationConfig, ClassWeights, LabeledRow,
};
use persel::synthetic;

pub fn run_example() -> persel::Result<ClassWeights> {
    let corpus = synthetic::generate(50, 21)?;
    let rows = corpus
        .dataset
        .into_profiles()
        .into_iter()
        .map(LabeledRow::from_profile)
        .collect::<persel::Result<Vec<_>>>()?;
    println!("labeled (neg, pos): {:?}", label_counts(&rows));

    let (train, test) = train_test_split(&rows, 0.8, 1)?;
    println!("split: {} train, {} test", train.len(), test.len());

    let config = AugmentationConfig::new(0.5, 2)?;
    let sample = &train[0].profile.about;
    println!("original:  {sample}\naugmented: {}", augment_with_synonyms(sample, &corpus.lexicon, &config)?);

    let augmented = augment_dataset(&train, &corpus.lexicon, &config)?;
    let balanced = balance_classes(&augmented, 3)?;
    println!(
        "augmented {:?} -> balanced {:?}",
        label_counts(&augmented),
        label_counts(&balanced)
    );

    let weights = compute_class_weights(&train)?;
    println!("class weights on the unbalanced split: {weights:?}");
    Ok(weights)
}

fn main() -> persel::Result<()> {
    run_example().map(|_| ())
}
