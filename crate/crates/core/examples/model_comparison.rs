//! Compare three classifiers from their confusion-matrix counts at a fixed
//! threshold and print the comparison table and plot data.

use persel::eval::{
    classification_report, compare_models, ComparisonTable, ConfusionMatrix, ModelEntry, ThresholdSearchResult,
};

pub fn run_example() -> persel::Result<ComparisonTable> {
    // (name, tp, fp, tn, fn, parameters)
    let models = [
        ("large", 12, 0, 5, 3, 125_000_000),
        ("distilled", 13, 1, 4, 2, 66_000_000),
        ("small", 11, 2, 3, 4, 20_000_000),
    ];
    let mut entries = Vec::new();
    for (name, tp, fp, tn, fn_, params) in models {
        let cm = ConfusionMatrix::new(tp, fp, tn, fn_)?;
        entries.push(ModelEntry {
            name: name.into(),
            report: classification_report(&cm),
            threshold: ThresholdSearchResult::at(&cm, 0.5),
            parameter_count: Some(params),
        });
    }
    let table = compare_models(&entries)?;
    print!("{}", table.to_table());
    let mut plot = Vec::new();
    table.write_plot_csv(&mut plot)?;
    print!("\n{}", String::from_utf8_lossy(&plot));
    Ok(table)
}

fn main() -> persel::Result<()> {
    run_example().map(|_| ())
}
