//! FASTQ parsing, validation, and serialization.
//!
//! Records are the usual 4-line form: `@header`, bases, `+` separator,
//! qualities (Phred+33). Bases are normalized to the `{A,C,G,T,N}` alphabet
//! on parse; the separator line content is discarded.

use std::io::{self, Write};

use thiserror::Error;

/// Base alphabet accepted everywhere downstream.
pub const BASES: [u8; 5] = *b"ACGNT";

/// Lowest printable quality byte (Phred 0).
pub const QUAL_MIN: u8 = 33;
/// Highest printable quality byte (Phred 93).
pub const QUAL_MAX: u8 = 126;

#[derive(Debug, Error)]
pub enum FastqError {
    #[error("record {record}: truncated (expected 4 lines)")]
    Truncated { record: usize },
    #[error("record {record}: header line does not start with '@'")]
    MissingHeader { record: usize },
    #[error("record {record}: separator line does not start with '+'")]
    MissingSeparator { record: usize },
    #[error("record {record}: bases length {bases} != qualities length {quals}")]
    LengthMismatch {
        record: usize,
        bases: usize,
        quals: usize,
    },
    #[error("record {record}: empty read")]
    EmptyRead { record: usize },
    #[error("record {record}: quality byte {byte:#04x} outside printable range 33..=126")]
    InvalidQuality { record: usize, byte: u8 },
    #[error("record {record}: base {byte:#04x} outside {{A,C,G,T,N}}")]
    InvalidBase { record: usize, byte: u8 },
    #[error("field lengths disagree: {reads} reads, {quals} quality strings, {headers} headers")]
    FieldMismatch {
        reads: usize,
        quals: usize,
        headers: usize,
    },
}

/// What to do with header lines when writing FASTQ back out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HeaderPolicy {
    /// Emit the stored header after '@'.
    Keep,
    /// Emit a bare "@" for every record.
    #[default]
    Strip,
}

/// Parsed read collection: bases, qualities, and headers, index-aligned.
///
/// Headers are stored without the leading '@'. Every read is non-empty and
/// its quality string has the same length.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReadCollection {
    reads: Vec<Vec<u8>>,
    quals: Vec<Vec<u8>>,
    headers: Vec<Vec<u8>>,
}

impl ReadCollection {
    /// Build a collection, validating all invariants.
    pub fn new(
        reads: Vec<Vec<u8>>,
        quals: Vec<Vec<u8>>,
        headers: Vec<Vec<u8>>,
    ) -> Result<Self, FastqError> {
        if reads.len() != quals.len() || reads.len() != headers.len() {
            return Err(FastqError::FieldMismatch {
                reads: reads.len(),
                quals: quals.len(),
                headers: headers.len(),
            });
        }
        for (idx, (read, qual)) in reads.iter().zip(&quals).enumerate() {
            let record = idx + 1;
            if read.is_empty() {
                return Err(FastqError::EmptyRead { record });
            }
            if read.len() != qual.len() {
                return Err(FastqError::LengthMismatch {
                    record,
                    bases: read.len(),
                    quals: qual.len(),
                });
            }
            if let Some(&byte) = read.iter().find(|b| !BASES.contains(b)) {
                return Err(FastqError::InvalidBase { record, byte });
            }
            if let Some(&byte) = qual.iter().find(|&&b| !(QUAL_MIN..=QUAL_MAX).contains(&b)) {
                return Err(FastqError::InvalidQuality { record, byte });
            }
        }
        Ok(Self {
            reads,
            quals,
            headers,
        })
    }

    /// Number of reads (`m`).
    pub fn len(&self) -> usize {
        self.reads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reads.is_empty()
    }

    /// Total length including one end-marker per read: `N = Σ (n_i + 1)`.
    pub fn total_len(&self) -> usize {
        self.reads.iter().map(|r| r.len() + 1).sum()
    }

    pub fn reads(&self) -> &[Vec<u8>] {
        &self.reads
    }

    pub fn quals(&self) -> &[Vec<u8>] {
        &self.quals
    }

    pub fn headers(&self) -> &[Vec<u8>] {
        &self.headers
    }

    pub fn read(&self, i: usize) -> &[u8] {
        &self.reads[i]
    }

    pub fn qual(&self, i: usize) -> &[u8] {
        &self.quals[i]
    }
}

/// Side counters produced while parsing.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseStats {
    /// Bases outside {A,C,G,T,N} (after uppercasing) that were rewritten to 'N'.
    pub normalized_bases: u64,
}

fn trim_cr(line: &[u8]) -> &[u8] {
    line.strip_suffix(b"\r").unwrap_or(line)
}

/// Parse a FASTQ byte buffer into a [`ReadCollection`].
///
/// Lowercase bases are uppercased; anything outside the alphabet becomes 'N'
/// and is tallied in [`ParseStats::normalized_bases`]. Separator line content
/// after '+' is discarded.
pub fn parse_fastq(input: &[u8]) -> Result<(ReadCollection, ParseStats), FastqError> {
    let mut reads = Vec::new();
    let mut quals = Vec::new();
    let mut headers = Vec::new();
    let mut stats = ParseStats::default();

    let input = input.strip_suffix(b"\n").unwrap_or(input);
    if input.is_empty() {
        return Ok((ReadCollection::default(), stats));
    }
    let mut lines = input.split(|&b| b == b'\n').map(trim_cr);
    let mut record = 1usize; // record numbers in errors are 1-based
    while let Some(header) = lines.next() {
        if header.is_empty() {
            // Tolerate trailing blank lines, but nothing after them.
            if lines.any(|l| !l.is_empty()) {
                return Err(FastqError::MissingHeader { record });
            }
            break;
        }
        if header[0] != b'@' {
            return Err(FastqError::MissingHeader { record });
        }
        let bases_line = lines.next().ok_or(FastqError::Truncated { record })?;
        let sep = lines.next().ok_or(FastqError::Truncated { record })?;
        let qual_line = lines.next().ok_or(FastqError::Truncated { record })?;

        if bases_line.is_empty() {
            return Err(FastqError::EmptyRead { record });
        }
        if sep.first() != Some(&b'+') {
            return Err(FastqError::MissingSeparator { record });
        }
        if bases_line.len() != qual_line.len() {
            return Err(FastqError::LengthMismatch {
                record,
                bases: bases_line.len(),
                quals: qual_line.len(),
            });
        }
        if let Some(&byte) = qual_line
            .iter()
            .find(|&&b| !(QUAL_MIN..=QUAL_MAX).contains(&b))
        {
            return Err(FastqError::InvalidQuality { record, byte });
        }

        let mut bases = Vec::with_capacity(bases_line.len());
        for &b in bases_line {
            let up = b.to_ascii_uppercase();
            if BASES.contains(&up) {
                bases.push(up);
            } else {
                bases.push(b'N');
                stats.normalized_bases += 1;
            }
        }

        headers.push(header[1..].to_vec());
        reads.push(bases);
        quals.push(qual_line.to_vec());
        record += 1;
    }

    Ok((ReadCollection::new(reads, quals, headers)?, stats))
}

/// Serialize a collection as 4-line FASTQ records.
///
/// Under [`HeaderPolicy::Strip`] every header line is exactly "@" and the
/// output is byte-identical regardless of the stored headers. The separator
/// line is always a bare "+".
pub fn write_fastq_to<W: Write>(
    rc: &ReadCollection,
    policy: HeaderPolicy,
    out: &mut W,
) -> io::Result<()> {
    for i in 0..rc.len() {
        out.write_all(b"@")?;
        if policy == HeaderPolicy::Keep {
            out.write_all(&rc.headers[i])?;
        }
        out.write_all(b"\n")?;
        out.write_all(&rc.reads[i])?;
        out.write_all(b"\n+\n")?;
        out.write_all(&rc.quals[i])?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// [`write_fastq_to`] into a fresh buffer.
pub fn write_fastq(rc: &ReadCollection, policy: HeaderPolicy) -> Vec<u8> {
    let mut out = Vec::with_capacity(rc.total_len() * 2 + rc.len() * 8);
    write_fastq_to(rc, policy, &mut out).expect("writing to Vec cannot fail");
    out
}
