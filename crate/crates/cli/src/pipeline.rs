//! Pipeline orchestration and error-to-exit-code mapping.
//!
//! Exit codes: 0 success, 1 usage, 2 I/O, 3 data format, 4 backend failure.

use std::fs::File;
use std::io::{BufWriter, Read};
use std::path::Path;

use thiserror::Error;

use fqsmooth_core::cluster::clusters_from_lcp;
use fqsmooth_core::codec::{build_report, BackendSpec, CodecError};
use fqsmooth_core::ebwt::{build_index, export_index, import_index, EbwtError, EbwtIndex};
use fqsmooth_core::fastq::{parse_fastq, write_fastq_to, ReadCollection};
use fqsmooth_core::reconstruct::{invert, Headers, ReconstructError};
use fqsmooth_core::smoothing::run_smoothing;

use crate::Cli;

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_FORMAT: i32 = 3;
pub const EXIT_BACKEND: i32 = 4;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("error: {0}")]
    Usage(String),
    #[error("error [{stage}]: {source}")]
    Io {
        stage: &'static str,
        source: std::io::Error,
    },
    #[error("error [{stage}]: {message}")]
    Format { stage: &'static str, message: String },
    #[error("error [backend]: {0}")]
    Backend(CodecError),
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Usage(_) => EXIT_USAGE,
            PipelineError::Io { .. } => EXIT_IO,
            PipelineError::Format { .. } => EXIT_FORMAT,
            PipelineError::Backend(_) => EXIT_BACKEND,
        }
    }
}

fn io_err(stage: &'static str) -> impl Fn(std::io::Error) -> PipelineError {
    move |source| PipelineError::Io { stage, source }
}

fn ebwt_err(stage: &'static str, err: EbwtError) -> PipelineError {
    match err {
        EbwtError::Io(source) => PipelineError::Io { stage, source },
        other => PipelineError::Format {
            stage,
            message: other.to_string(),
        },
    }
}

fn codec_err(err: CodecError) -> PipelineError {
    match err {
        CodecError::Io(source) => PipelineError::Io {
            stage: "report",
            source,
        },
        other => PipelineError::Backend(other),
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>, PipelineError> {
    let mut file = File::open(path).map_err(io_err("input"))?;
    let mut bytes = Vec::new();
    if path.extension().is_some_and(|e| e == "gz") {
        flate2::read::MultiGzDecoder::new(file)
            .read_to_end(&mut bytes)
            .map_err(io_err("input"))?;
    } else {
        file.read_to_end(&mut bytes).map_err(io_err("input"))?;
    }
    Ok(bytes)
}

/// The index plus, when parsed from FASTQ, the source collection (for header
/// retention).
enum Source {
    Parsed(EbwtIndex, ReadCollection),
    Imported(EbwtIndex),
}

fn load_source(cli: &Cli) -> Result<Source, PipelineError> {
    if let Some(prefix) = &cli.import_index {
        let index = import_index(prefix).map_err(|e| ebwt_err("import-index", e))?;
        return Ok(Source::Imported(index));
    }
    let input = cli.input.as_ref().ok_or_else(|| {
        PipelineError::Usage("an input FASTQ is required unless --import-index is given".into())
    })?;
    let bytes = read_input(input)?;
    let (rc, stats) = parse_fastq(&bytes).map_err(|e| PipelineError::Format {
        stage: "parse",
        message: e.to_string(),
    })?;
    if stats.normalized_bases > 0 {
        eprintln!(
            "fqsmooth: normalized {} base(s) outside {{A,C,G,T,N}} to N",
            stats.normalized_bases
        );
    }
    let index = build_index(&rc).map_err(|e| ebwt_err("build", e))?;
    Ok(Source::Parsed(index, rc))
}

pub fn run(cli: &Cli) -> Result<(), PipelineError> {
    let cfg = cli.smoothing_config();
    cfg.validate()
        .map_err(|e| PipelineError::Usage(e.to_string()))?;
    if cli.keep_headers && cli.import_index.is_some() {
        return Err(PipelineError::Usage(
            "--keep-headers needs the source FASTQ; it cannot be combined with --import-index"
                .into(),
        ));
    }
    let backend = BackendSpec::parse(&cli.backend).map_err(codec_err)?;

    let source = load_source(cli)?;
    let (index, parsed) = match &source {
        Source::Parsed(index, rc) => (index, Some(rc)),
        Source::Imported(index) => (index, None),
    };

    let clusters = clusters_from_lcp(index.lcp().iter().copied(), cfg.k_m);
    let overlay = run_smoothing(index, &clusters, &cfg);

    let headers = match (cfg.header_policy, parsed) {
        (fqsmooth_core::fastq::HeaderPolicy::Keep, Some(rc)) => Headers::Keep(rc.headers()),
        _ => Headers::Strip,
    };
    let output = invert(index, &overlay, headers).map_err(|e| match e {
        ReconstructError::Collection(inner) => PipelineError::Format {
            stage: "reconstruct",
            message: inner.to_string(),
        },
        other => PipelineError::Format {
            stage: "reconstruct",
            message: other.to_string(),
        },
    })?;

    let file = File::create(&cli.output).map_err(io_err("output"))?;
    let mut writer = BufWriter::new(file);
    write_fastq_to(&output, cfg.header_policy, &mut writer).map_err(io_err("output"))?;
    drop(writer);

    if let Some(prefix) = &cli.dump_index {
        export_index(index, prefix).map_err(|e| ebwt_err("dump-index", e))?;
    }

    if let Some(report_path) = &cli.report {
        let report = build_report(&output, cfg.header_policy, &backend).map_err(codec_err)?;
        let json = serde_json::to_vec_pretty(&report).expect("report serializes");
        std::fs::write(report_path, json).map_err(io_err("report"))?;
    }

    eprintln!(
        "fqsmooth: {} reads, {} transform positions, {} clusters, {} base edit(s), {} quality edit(s)",
        index.num_reads(),
        index.len(),
        clusters.len(),
        overlay.base_edits.len(),
        overlay.qual_edits.len()
    );
    Ok(())
}
