//! Encode synthetic profiles with an ordinal map and print the Pearson
//! correlation between the encoded features.

use persel::profile::{encode_features, pearson_correlation_matrix, CorrelationMatrix};
use persel::synthetic;

pub fn run_example() -> persel::Result<CorrelationMatrix> {
    let corpus = synthetic::generate(120, 3)?;
    let features = encode_features(&corpus.dataset, &corpus.encoding)?;
    let corr = pearson_correlation_matrix(&features)?;

    print!("{:>18}", "");
    for name in &corr.names {
        print!(" {:>9.9}", name);
    }
    println!();
    for (i, name) in corr.names.iter().enumerate() {
        print!("{name:>18}");
        for j in 0..corr.names.len() {
            print!(" {:>9.3}", corr.values[[i, j]]);
        }
        println!();
    }
    Ok(corr)
}

fn main() -> persel::Result<()> {
    run_example().map(|_| ())
}
