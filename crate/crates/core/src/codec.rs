//! Stream splitting, pluggable compression backends, and size/entropy
//! reporting.
//!
//! Backends are external commands rather than linked libraries: any
//! general-purpose compressor reading stdin and writing stdout (or taking
//! `{in}`/`{out}` file placeholders) can be plugged in. The built-in `store`
//! backend is the identity and is always available.

use std::io::{Read, Write};
use std::process::{Command, Stdio};

use serde::Serialize;
use thiserror::Error;

use crate::fastq::{write_fastq, HeaderPolicy, ReadCollection};

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("entropy of an empty stream is undefined")]
    EmptyStream,
    #[error("backend command is empty")]
    EmptyCommand,
    #[error("failed to run backend `{command}`: {source}")]
    Spawn {
        command: String,
        source: std::io::Error,
    },
    #[error("backend `{command}` exited with {status}: {stderr}")]
    Failed {
        command: String,
        status: String,
        stderr: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A compression backend.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BackendSpec {
    /// Identity: output equals input. Always available.
    Store,
    /// Shell command template. With `{in}`/`{out}` placeholders the data
    /// moves through temporary files; otherwise through stdin/stdout.
    Command(String),
}

impl BackendSpec {
    pub fn parse(spec: &str) -> Result<Self, CodecError> {
        let spec = spec.trim();
        if spec.is_empty() {
            return Err(CodecError::EmptyCommand);
        }
        if spec == "store" {
            Ok(BackendSpec::Store)
        } else {
            Ok(BackendSpec::Command(spec.to_string()))
        }
    }

    /// Identifier recorded in reports.
    pub fn id(&self) -> String {
        match self {
            BackendSpec::Store => "store".to_string(),
            BackendSpec::Command(cmd) => cmd.clone(),
        }
    }
}

/// Split a collection into its three newline-delimited streams
/// (headers, bases, qualities). Recombining the lines record by record,
/// inserting the bare "+" separator, reproduces the serialized FASTQ.
pub fn split_streams(rc: &ReadCollection) -> (Vec<u8>, Vec<u8>, Vec<u8>) {
    let mut headers = Vec::new();
    let mut bases = Vec::new();
    let mut quals = Vec::new();
    for i in 0..rc.len() {
        headers.push(b'@');
        headers.extend_from_slice(&rc.headers()[i]);
        headers.push(b'\n');
        bases.extend_from_slice(rc.read(i));
        bases.push(b'\n');
        quals.extend_from_slice(rc.qual(i));
        quals.push(b'\n');
    }
    (headers, bases, quals)
}

/// Run a command template. Input travels through a temporary file when the
/// template names `{in}`, through stdin otherwise; output likewise through
/// `{out}` or stdout. All four combinations work.
fn run_command(template: &str, input: &[u8]) -> Result<Vec<u8>, CodecError> {
    let file_in = template.contains("{in}");
    let file_out = template.contains("{out}");

    let dir = if file_in || file_out {
        Some(tempfile::tempdir()?)
    } else {
        None
    };
    let mut command = template.to_string();
    let out_path = dir.as_ref().map(|d| d.path().join("stream.out"));
    if file_in {
        let in_path = dir.as_ref().expect("tempdir exists").path().join("stream.in");
        std::fs::write(&in_path, input)?;
        command = command.replace("{in}", &in_path.display().to_string());
    }
    if let Some(out_path) = &out_path {
        command = command.replace("{out}", &out_path.display().to_string());
    }

    let mut child = Command::new("sh")
        .arg("-c")
        .arg(&command)
        .stdin(if file_in { Stdio::null() } else { Stdio::piped() })
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|source| CodecError::Spawn {
            command: command.clone(),
            source,
        })?;

    // Feed stdin from a helper thread; large inputs would otherwise deadlock
    // against the stdout pipe.
    let writer = if file_in {
        None
    } else {
        let mut stdin = child.stdin.take().expect("stdin piped");
        let payload = input.to_vec();
        Some(std::thread::spawn(move || {
            let _ = stdin.write_all(&payload); // broken pipe shows up as exit status
        }))
    };

    let mut stdout = Vec::new();
    child
        .stdout
        .take()
        .expect("stdout piped")
        .read_to_end(&mut stdout)?;
    let mut stderr = String::new();
    child
        .stderr
        .take()
        .expect("stderr piped")
        .read_to_string(&mut stderr)?;
    let status = child.wait()?;
    if let Some(writer) = writer {
        let _ = writer.join();
    }

    if !status.success() {
        return Err(CodecError::Failed {
            command,
            status: status.to_string(),
            stderr: stderr.trim().to_string(),
        });
    }
    match out_path {
        Some(path) if file_out => Ok(std::fs::read(path)?),
        _ => Ok(stdout),
    }
}

/// Compress a stream through the backend, returning the compressed bytes.
pub fn compress(stream: &[u8], backend: &BackendSpec) -> Result<Vec<u8>, CodecError> {
    match backend {
        BackendSpec::Store => Ok(stream.to_vec()),
        BackendSpec::Command(template) => run_command(template, stream),
    }
}

/// Shannon order-0 entropy of the byte histogram, in bits per symbol.
pub fn entropy0(stream: &[u8]) -> Result<f64, CodecError> {
    if stream.is_empty() {
        return Err(CodecError::EmptyStream);
    }
    let mut hist = [0u64; 256];
    for &b in stream {
        hist[b as usize] += 1;
    }
    let n = stream.len() as f64;
    let mut h = 0f64;
    for &count in hist.iter().filter(|&&c| c > 0) {
        let p = count as f64 / n;
        h -= p * p.log2();
    }
    Ok(h)
}

/// Sizes and ratio of one compressed stream.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct StreamStats {
    /// Uncompressed size in bytes.
    pub original: u64,
    /// Compressed size in bytes.
    pub compressed: u64,
    /// `compressed / original`; 0 for an empty stream.
    pub ratio: f64,
}

impl StreamStats {
    fn measure(stream: &[u8], backend: &BackendSpec) -> Result<Self, CodecError> {
        let compressed = compress(stream, backend)?;
        let original = stream.len() as u64;
        Ok(Self {
            original,
            compressed: compressed.len() as u64,
            ratio: if original == 0 {
                0.0
            } else {
                compressed.len() as f64 / original as f64
            },
        })
    }
}

/// Per-stream and whole-file compression outcome for one FASTQ.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CompressionReport {
    pub backend: String,
    pub headers: StreamStats,
    pub bases: StreamStats,
    pub quals: StreamStats,
    pub fastq: StreamStats,
    /// Order-0 entropy of the base symbols (newlines excluded), bits/symbol.
    pub base_entropy: f64,
    /// Order-0 entropy of the quality symbols (newlines excluded),
    /// bits/symbol.
    pub qual_entropy: f64,
}

/// Compress the three streams and the whole serialized file, and report
/// sizes, ratios, and symbol entropies.
pub fn build_report(
    rc: &ReadCollection,
    policy: HeaderPolicy,
    backend: &BackendSpec,
) -> Result<CompressionReport, CodecError> {
    let stripped = match policy {
        HeaderPolicy::Keep => None,
        // Statistics must describe the file as written, headers replaced.
        HeaderPolicy::Strip => Some(ReadCollection::new(
            rc.reads().to_vec(),
            rc.quals().to_vec(),
            vec![Vec::new(); rc.len()],
        )
        .expect("shape-preserving copy")),
    };
    let subject = stripped.as_ref().unwrap_or(rc);

    let (headers, bases, quals) = split_streams(subject);
    let fastq = write_fastq(subject, policy);

    let stats = measure_streams(&[&headers, &bases, &quals, &fastq], backend)?;

    let base_symbols: Vec<u8> = subject.reads().iter().flatten().copied().collect();
    let qual_symbols: Vec<u8> = subject.quals().iter().flatten().copied().collect();
    let base_entropy = entropy0(&base_symbols).unwrap_or(0.0);
    let qual_entropy = entropy0(&qual_symbols).unwrap_or(0.0);

    Ok(CompressionReport {
        backend: backend.id(),
        headers: stats[0],
        bases: stats[1],
        quals: stats[2],
        fastq: stats[3],
        base_entropy,
        qual_entropy,
    })
}

#[cfg(feature = "parallel")]
fn measure_streams(
    streams: &[&Vec<u8>],
    backend: &BackendSpec,
) -> Result<Vec<StreamStats>, CodecError> {
    use rayon::prelude::*;
    streams
        .par_iter()
        .map(|s| StreamStats::measure(s, backend))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn measure_streams(
    streams: &[&Vec<u8>],
    backend: &BackendSpec,
) -> Result<Vec<StreamStats>, CodecError> {
    streams
        .iter()
        .map(|s| StreamStats::measure(s, backend))
        .collect()
}
