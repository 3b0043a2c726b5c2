//! Command-line driver for the smoothing pipeline.

mod pipeline;

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, ValueEnum};

use fqsmooth_core::fastq::HeaderPolicy;
use fqsmooth_core::smoothing::{QStrategy, SmoothingConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum StrategyArg {
    Const,
    MeanErr,
    Max,
    Avg,
}

impl From<StrategyArg> for QStrategy {
    fn from(value: StrategyArg) -> Self {
        match value {
            StrategyArg::Const => QStrategy::Constant,
            StrategyArg::MeanErr => QStrategy::MeanErr,
            StrategyArg::Max => QStrategy::Max,
            StrategyArg::Avg => QStrategy::Avg,
        }
    }
}

fn parse_qual_byte(s: &str) -> Result<u8, String> {
    let bytes = s.as_bytes();
    if bytes.len() == 1 && (33..=126).contains(&bytes[0]) {
        Ok(bytes[0])
    } else {
        Err(format!(
            "`{s}` is not a single printable quality character (ASCII 33..=126)"
        ))
    }
}

/// Rewrite a FASTQ file: detect positional clusters in the extended BWT of
/// the reads, replace noisy bases, smooth quality scores, and write the
/// modified FASTQ (optionally compressing it through an external backend).
#[derive(Debug, Parser)]
#[command(name = "fqsmooth", version, disable_help_subcommand = true)]
pub struct Cli {
    /// Input FASTQ (plain or .gz). Optional with --import-index.
    input: Option<PathBuf>,

    /// Output FASTQ path.
    #[arg(short, long)]
    output: PathBuf,

    /// Minimum context length k_m for cluster detection.
    #[arg(short = 'T', long = "min-context", default_value_t = 30)]
    min_context: u32,

    /// Replacement quality under the constant strategy.
    #[arg(short = 'Q', long = "qual-const", default_value = "@", value_parser = parse_qual_byte)]
    qual_const: u8,

    /// How the per-cluster replacement quality is chosen.
    #[arg(long, value_enum, default_value = "const")]
    strategy: StrategyArg,

    /// Apply 8-level quality binning to the whole output.
    #[arg(long = "bin")]
    binning: bool,

    /// Qualities strictly below this character count as low (noise
    /// candidates).
    #[arg(long = "noise-qs", default_value = "5", value_parser = parse_qual_byte)]
    noise_qs: u8,

    /// Frequency fraction a symbol must exceed to count as frequent.
    #[arg(long = "freq", default_value_t = 0.40)]
    freq: f64,

    /// Left-context length for disambiguating two frequent symbols.
    #[arg(long = "ell", default_value_t = 1)]
    ell: usize,

    /// Disable base replacement; only smooth quality scores.
    #[arg(long = "no-base-edits")]
    no_base_edits: bool,

    /// Keep original headers instead of replacing them with '@'.
    #[arg(long = "keep-headers")]
    keep_headers: bool,

    /// Compression backend: `store`, or a shell command reading stdin and
    /// writing stdout (or using {in}/{out} file placeholders).
    #[arg(long, default_value = "store")]
    backend: String,

    /// Write a JSON compression report for the output FASTQ here.
    #[arg(long)]
    report: Option<PathBuf>,

    /// Write the index files (.ebwt, .ebwt.qs, .lcp, .docmap) with this
    /// prefix.
    #[arg(long = "dump-index")]
    dump_index: Option<PathBuf>,

    /// Skip construction and load pre-built index files with this prefix.
    #[arg(long = "import-index", conflicts_with = "input")]
    import_index: Option<PathBuf>,
}

impl Cli {
    fn smoothing_config(&self) -> SmoothingConfig {
        SmoothingConfig {
            k_m: self.min_context,
            q_strategy: self.strategy.into(),
            q_const: self.qual_const,
            freq_threshold: self.freq,
            ell: self.ell,
            noise_q_threshold: self.noise_qs,
            binning: self.binning,
            base_edits: !self.no_base_edits,
            header_policy: if self.keep_headers {
                HeaderPolicy::Keep
            } else {
                HeaderPolicy::Strip
            },
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => pipeline::EXIT_USAGE,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = pipeline::run(&cli) {
        eprintln!("{err}");
        std::process::exit(err.exit_code());
    }
}
