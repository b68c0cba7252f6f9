use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use persel::config::RunConfig;
use persel::pipeline;
use persel::Result;

#[derive(Parser)]
#[command(name = "persel", version, about = "Batch personnel selection and classifier evaluation")]
struct Cli {
    /// Run configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the configured output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load the profile file and write the canonical dataset.
    Ingest,
    /// Label, split, augment and balance the dataset.
    Preprocess,
    /// Rank candidates with TOPSIS and validate against reference scores.
    Rank,
    /// Train the token-count scorer and write its test-set score file.
    TrainBaseline,
    /// Evaluate one score file.
    Evaluate {
        score_file: PathBuf,
        /// Fixed decision threshold instead of the Youden-optimal one.
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Compare several score files.
    Compare {
        score_files: Vec<PathBuf>,
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Collect the text artifacts into one report.
    Report,
}

fn print<T: Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| persel::Error::Config(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(out) = cli.out {
        config.out = out;
    }
    match cli.command {
        Command::Evaluate { threshold: Some(t), .. } | Command::Compare { threshold: Some(t), .. } => {
            config.evaluate.threshold = Some(t);
        }
        _ => {}
    }
    config.validate()?;

    match cli.command {
        Command::Ingest => print(&pipeline::cmd_ingest(&config)?),
        Command::Preprocess => print(&pipeline::cmd_preprocess(&config)?),
        Command::Rank => {
            let summary = pipeline::cmd_rank(&config)?;
            print!("{}", summary.to_table());
            if let Some(v) = &summary.validation {
                print!("\n{}", v.to_table());
            }
            Ok(())
        }
        Command::TrainBaseline => print(&pipeline::cmd_train_baseline(&config)?),
        Command::Evaluate { score_file, .. } => {
            print!("{}", pipeline::cmd_evaluate(&config, &score_file)?.to_table());
            Ok(())
        }
        Command::Compare { score_files, .. } => {
            print!("{}", pipeline::cmd_compare(&config, &score_files)?.to_table());
            Ok(())
        }
        Command::Report => {
            let path = pipeline::cmd_report(&config)?;
            println!("{}", path.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
