//! FASTQ reconstruction: invert the transform by walking LF over the
//! *original* symbols, emitting overlay substitutions along the way.
//!
//! The walk for one read starts at its sentinel-context row (one of the first
//! `m` rows), emits the base and quality of every row it visits, and stops on
//! reaching a '$' row. The terminal '$' occurrence identifies, through the
//! end-marker map, which output record the walk belongs to, so record order
//! always matches the source file. Navigation never consults edited symbols.

use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::ebwt::{EbwtIndex, SENTINEL};
use crate::fastq::{FastqError, ReadCollection};
use crate::smoothing::EditOverlay;

#[derive(Debug, Error)]
pub enum ReconstructError {
    #[error("index has no end-marker map (imported without a .docmap sidecar)")]
    MissingDollarMap,
    #[error("{0} headers supplied for {1} reads")]
    HeaderCountMismatch(usize, usize),
    #[error("index is inconsistent: {0}")]
    CorruptIndex(String),
    #[error(transparent)]
    Collection(#[from] FastqError),
}

/// Header source for the reconstructed records.
#[derive(Debug, Clone, Copy)]
pub enum Headers<'a> {
    /// Every record gets an empty header (written as a bare "@").
    Strip,
    /// Record `j` keeps `headers[j]`, typically from the parsed source.
    Keep(&'a [Vec<u8>]),
}

struct Walk {
    slot: usize,
    bases: Vec<u8>,
    quals: Vec<u8>,
}

fn walk_read(index: &EbwtIndex, overlay: &EditOverlay, start_row: usize) -> Result<Walk, ReconstructError> {
    let dollar_read = index.dollar_read().ok_or(ReconstructError::MissingDollarMap)?;
    let limit = index.len();
    let mut bases = Vec::new();
    let mut quals = Vec::new();
    let mut row = start_row;
    loop {
        let sym = index.symbol(row);
        if sym == SENTINEL {
            let occurrence = index.rank(SENTINEL, row);
            let slot = dollar_read[occurrence] as usize;
            bases.reverse();
            quals.reverse();
            return Ok(Walk { slot, bases, quals });
        }
        if bases.len() >= limit {
            return Err(ReconstructError::CorruptIndex(format!(
                "walk from row {start_row} exceeds transform length {limit}"
            )));
        }
        bases.push(overlay.base_edits.get(&row).copied().unwrap_or(sym));
        quals.push(overlay.qual_edits.get(&row).copied().unwrap_or(index.quality(row)));
        row = index.lf(row);
    }
}

fn assemble(
    index: &EbwtIndex,
    walks: Vec<Walk>,
    headers: Headers<'_>,
) -> Result<ReadCollection, ReconstructError> {
    let m = index.num_reads();
    let mut reads: Vec<Option<Vec<u8>>> = vec![None; m];
    let mut quals: Vec<Option<Vec<u8>>> = vec![None; m];
    let mut emitted = 0usize;
    for walk in walks {
        if reads[walk.slot].is_some() {
            return Err(ReconstructError::CorruptIndex(format!(
                "two walks terminate at read {}",
                walk.slot
            )));
        }
        emitted += walk.bases.len();
        reads[walk.slot] = Some(walk.bases);
        quals[walk.slot] = Some(walk.quals);
    }
    if emitted != index.len() - m {
        return Err(ReconstructError::CorruptIndex(format!(
            "walks emitted {emitted} bases, transform holds {}",
            index.len() - m
        )));
    }

    let header_vec: Vec<Vec<u8>> = match headers {
        Headers::Strip => vec![Vec::new(); m],
        Headers::Keep(list) => {
            if list.len() != m {
                return Err(ReconstructError::HeaderCountMismatch(list.len(), m));
            }
            list.to_vec()
        }
    };

    let reads: Vec<Vec<u8>> = reads.into_iter().map(|r| r.expect("slot coverage checked")).collect();
    let quals: Vec<Vec<u8>> = quals.into_iter().map(|q| q.expect("slot coverage checked")).collect();
    Ok(ReadCollection::new(reads, quals, header_vec)?)
}

/// Invert sequentially. See [`invert`].
pub fn invert_seq(
    index: &EbwtIndex,
    overlay: &EditOverlay,
    headers: Headers<'_>,
) -> Result<ReadCollection, ReconstructError> {
    let walks = (0..index.num_reads())
        .map(|row| walk_read(index, overlay, row))
        .collect::<Result<Vec<_>, _>>()?;
    assemble(index, walks, headers)
}

/// Invert with one parallel walk per read. Walks only read the index and the
/// overlay, and output slots are fixed by the end-marker map, so the result
/// is identical to the sequential path.
#[cfg(feature = "parallel")]
pub fn invert_par(
    index: &EbwtIndex,
    overlay: &EditOverlay,
    headers: Headers<'_>,
) -> Result<ReadCollection, ReconstructError> {
    let walks = (0..index.num_reads())
        .into_par_iter()
        .map(|row| walk_read(index, overlay, row))
        .collect::<Result<Vec<_>, _>>()?;
    assemble(index, walks, headers)
}

/// Rebuild the (possibly edited) collection from the index.
///
/// With an empty overlay this reproduces the source bases and qualities
/// byte-exactly. Requires the end-marker map; an index imported without its
/// `.docmap` cannot assign walks to output records.
pub fn invert(
    index: &EbwtIndex,
    overlay: &EditOverlay,
    headers: Headers<'_>,
) -> Result<ReadCollection, ReconstructError> {
    #[cfg(feature = "parallel")]
    {
        invert_par(index, overlay, headers)
    }
    #[cfg(not(feature = "parallel"))]
    {
        invert_seq(index, overlay, headers)
    }
}
