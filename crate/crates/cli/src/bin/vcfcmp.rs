//! Compare two variant call sets and print TP/FP/FN, precision, sensitivity,
//! and F-measure as JSON.
//!
//! Inputs are minimal tab-separated `chrom pos ref alt` files or VCF bodies
//! ('#' lines skipped, columns 1, 2, 4, 5). Exit codes follow the pipeline
//! convention: 0 success, 1 usage, 2 I/O, 3 data format.

use std::path::PathBuf;
use std::process::exit;

use clap::error::ErrorKind;
use clap::Parser;

use fqsmooth_core::metrics::{compare, VariantSet};

#[derive(Debug, Parser)]
#[command(name = "vcfcmp", version)]
struct Cli {
    /// Baseline (truth) variant set.
    baseline: PathBuf,

    /// Query (called) variant set.
    query: PathBuf,

    /// Write the JSON report here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn load(path: &PathBuf) -> Result<VariantSet, (i32, String)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| (2, format!("error [read {}]: {e}", path.display())))?;
    VariantSet::from_text(&text).map_err(|e| (3, format!("error [parse {}]: {e}", path.display())))
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            exit(code);
        }
    };

    let (baseline, query) = match (load(&cli.baseline), load(&cli.query)) {
        (Ok(b), Ok(q)) => (b, q),
        (Err((code, msg)), _) | (_, Err((code, msg))) => {
            eprintln!("{msg}");
            exit(code);
        }
    };

    let comparison = compare(&baseline, &query);
    let json = serde_json::to_string_pretty(&comparison).expect("comparison serializes");
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, json) {
                eprintln!("error [write {}]: {e}", path.display());
                exit(2);
            }
        }
        None => println!("{json}"),
    }
}
