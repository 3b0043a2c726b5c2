//! Extended BWT of a read collection, with the BWT-permuted quality stream,
//! the LCP array, and LF-mapping support.
//!
//! Suffixes of all reads are sorted lexicographically, with each read closed
//! by its own end-marker: end-markers are smaller than every base and ordered
//! among themselves by read index. Position `i` of the transform holds the
//! symbol that circularly precedes the `i`-th sorted suffix, and `qs[i]`
//! holds that symbol's quality score ('!' where the symbol is '$').
//!
//! All positions in this API are 0-based.

mod disk;
mod sais;

pub use disk::{export_index, export_index_with_width, import_index, LcpWidth};

use thiserror::Error;

use crate::fastq::ReadCollection;

/// End-marker byte as materialized in the transform and its files.
pub const SENTINEL: u8 = b'$';
/// Quality placeholder stored at end-marker positions.
pub const QS_PLACEHOLDER: u8 = b'!';
/// Transform alphabet in sort order.
pub const ALPHABET: [u8; 6] = *b"$ACGNT";

/// Occurrence checkpoints are taken every `2^9` positions; ranks finish with
/// an on-demand scan of at most one block.
const OCC_STEP: usize = 512;

#[derive(Debug, Error)]
pub enum EbwtError {
    #[error("collection of total length {len} exceeds the in-memory budget ({max})")]
    TooLarge { len: usize, max: usize },
    #[error("index files disagree on length: ebwt {ebwt}, qs {qs}, lcp {lcp}")]
    LengthMismatch { ebwt: usize, qs: usize, lcp: usize },
    #[error("lcp value {value} does not fit the declared width of {width} byte(s)")]
    LcpOverflow { value: u32, width: u8 },
    #[error("unsupported lcp width byte {0} (expected 1 or 4)")]
    BadLcpWidth(u8),
    #[error("lcp payload of {bytes} bytes is not a multiple of the declared width {width}")]
    LcpTruncated { bytes: usize, width: u8 },
    #[error("invalid transform symbol {byte:#04x} at position {pos}")]
    BadSymbol { pos: usize, byte: u8 },
    #[error("quality byte {byte:#04x} at position {pos} outside printable range 33..=126")]
    BadQuality { pos: usize, byte: u8 },
    #[error("docmap holds {entries} entries but the transform has {markers} end-markers")]
    DocmapMismatch { entries: usize, markers: usize },
    #[error("docmap entry {value} out of range for {markers} reads")]
    DocmapOutOfRange { value: u32, markers: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Code of a transform symbol in `$ < A < C < G < N < T` order.
pub fn sym_code(b: u8) -> Option<usize> {
    match b {
        b'$' => Some(0),
        b'A' => Some(1),
        b'C' => Some(2),
        b'G' => Some(3),
        b'N' => Some(4),
        b'T' => Some(5),
        _ => None,
    }
}

#[derive(Debug, Clone)]
struct OccTable {
    checkpoints: Vec<[u32; 6]>,
}

impl OccTable {
    fn build(ebwt: &[u8]) -> Self {
        let blocks = ebwt.len() / OCC_STEP + 1;
        let mut checkpoints = Vec::with_capacity(blocks);
        let mut running = [0u32; 6];
        checkpoints.push(running);
        for (i, &b) in ebwt.iter().enumerate() {
            running[sym_code(b).expect("validated symbol")] += 1;
            if (i + 1) % OCC_STEP == 0 {
                checkpoints.push(running);
            }
        }
        Self { checkpoints }
    }

    /// Occurrences of `sym` in `ebwt[0..end)`.
    fn rank(&self, ebwt: &[u8], sym: u8, code: usize, end: usize) -> usize {
        let block = end / OCC_STEP;
        let mut count = self.checkpoints[block][code] as usize;
        for &b in &ebwt[block * OCC_STEP..end] {
            if b == sym {
                count += 1;
            }
        }
        count
    }
}

/// The built index. Immutable after construction; cheap to share across
/// threads.
#[derive(Debug, Clone)]
pub struct EbwtIndex {
    ebwt: Vec<u8>,
    qs: Vec<u8>,
    lcp: Vec<u32>,
    counts: [usize; 6],
    c_table: [usize; 6],
    occ: OccTable,
    /// Read terminated by the k-th '$' occurrence (in transform order).
    /// `None` when imported without a docmap sidecar.
    dollar_read: Option<Vec<u32>>,
    m: usize,
}

impl EbwtIndex {
    fn from_parts(
        ebwt: Vec<u8>,
        qs: Vec<u8>,
        lcp: Vec<u32>,
        dollar_read: Option<Vec<u32>>,
    ) -> Result<Self, EbwtError> {
        if ebwt.len() != qs.len() || ebwt.len() != lcp.len() {
            return Err(EbwtError::LengthMismatch {
                ebwt: ebwt.len(),
                qs: qs.len(),
                lcp: lcp.len(),
            });
        }
        let mut counts = [0usize; 6];
        for (pos, &b) in ebwt.iter().enumerate() {
            match sym_code(b) {
                Some(c) => counts[c] += 1,
                None => return Err(EbwtError::BadSymbol { pos, byte: b }),
            }
        }
        if let Some(pos) = qs.iter().position(|&q| !(33..=126).contains(&q)) {
            return Err(EbwtError::BadQuality { pos, byte: qs[pos] });
        }
        let mut c_table = [0usize; 6];
        for c in 1..6 {
            c_table[c] = c_table[c - 1] + counts[c - 1];
        }
        let m = counts[0];
        if let Some(map) = &dollar_read {
            if map.len() != m {
                return Err(EbwtError::DocmapMismatch {
                    entries: map.len(),
                    markers: m,
                });
            }
            if let Some(&value) = map.iter().find(|&&v| v as usize >= m) {
                return Err(EbwtError::DocmapOutOfRange { value, markers: m });
            }
        }
        let occ = OccTable::build(&ebwt);
        Ok(Self {
            ebwt,
            qs,
            lcp,
            counts,
            c_table,
            occ,
            dollar_read,
            m,
        })
    }

    /// Transform length `N` (bases plus one end-marker per read).
    pub fn len(&self) -> usize {
        self.ebwt.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ebwt.is_empty()
    }

    /// Number of reads `m`.
    pub fn num_reads(&self) -> usize {
        self.m
    }

    pub fn ebwt(&self) -> &[u8] {
        &self.ebwt
    }

    pub fn qs(&self) -> &[u8] {
        &self.qs
    }

    /// LCP values for positions `0..N`; the virtual value past the end is 0
    /// (see [`Self::lcp_at`]).
    pub fn lcp(&self) -> &[u32] {
        &self.lcp
    }

    /// `lcp[i]`, extended with the virtual trailing 0 at `i == len()`.
    pub fn lcp_at(&self, i: usize) -> u32 {
        if i == self.ebwt.len() {
            0
        } else {
            self.lcp[i]
        }
    }

    /// Per-symbol totals in `$ A C G N T` order.
    pub fn counts(&self) -> &[usize; 6] {
        &self.counts
    }

    /// Number of symbols lexicographically smaller than the symbol with the
    /// given code.
    pub fn c_table(&self) -> &[usize; 6] {
        &self.c_table
    }

    pub fn symbol(&self, row: usize) -> u8 {
        self.ebwt[row]
    }

    pub fn quality(&self, row: usize) -> u8 {
        self.qs[row]
    }

    pub fn dollar_read(&self) -> Option<&[u32]> {
        self.dollar_read.as_deref()
    }

    /// Occurrences of `sym` in `ebwt[0..end)`.
    pub fn rank(&self, sym: u8, end: usize) -> usize {
        assert!(end <= self.ebwt.len(), "rank end {end} out of range");
        let code = sym_code(sym).expect("rank of a symbol outside the alphabet");
        self.occ.rank(&self.ebwt, sym, code, end)
    }

    /// LF mapping: the row whose suffix is `ebwt[row]` prepended to `row`'s
    /// suffix.
    ///
    /// Panics if `row` is out of range or holds an end-marker (navigation
    /// over end-markers is undefined: position order among equal '$' bytes
    /// does not reflect read order).
    pub fn lf(&self, row: usize) -> usize {
        let sym = self.ebwt[row];
        assert!(sym != SENTINEL, "lf over an end-marker row");
        let code = sym_code(sym).expect("validated symbol");
        self.c_table[code] + self.occ.rank(&self.ebwt, sym, code, row)
    }

    /// The up-to-`ell` symbols immediately preceding `ebwt[row]` in its read,
    /// in left-to-right read order. Shorter than `ell` when the read start
    /// intervenes.
    ///
    /// Panics if `row` is out of range or holds an end-marker.
    pub fn left_context(&self, row: usize, ell: usize) -> Vec<u8> {
        assert!(
            self.ebwt[row] != SENTINEL,
            "left context of an end-marker row"
        );
        let mut context = Vec::with_capacity(ell);
        let mut p = row;
        for _ in 0..ell {
            p = self.lf(p);
            let sym = self.ebwt[p];
            if sym == SENTINEL {
                break;
            }
            context.push(sym);
        }
        context.reverse();
        context
    }
}

/// Largest supported transform length; bounded by the `u32` positions used in
/// the suffix sorter and the on-disk formats.
pub const MAX_TOTAL_LEN: usize = (u32::MAX - 1) as usize;

/// Build the index for a collection.
///
/// Suffix order follows the indexed-sentinel convention: the sentinel of read
/// `i` sorts below the sentinel of read `j` exactly when `i < j`, and both
/// sort below every base. Comparisons never look past a sentinel.
pub fn build_index(rc: &ReadCollection) -> Result<EbwtIndex, EbwtError> {
    let m = rc.len();
    let n = rc.total_len();
    if n > MAX_TOTAL_LEN {
        return Err(EbwtError::TooLarge {
            len: n,
            max: MAX_TOTAL_LEN,
        });
    }

    // Integer text: global terminator 0, sentinel of read j is j + 1, bases
    // are m + 1 + code. Distinct sentinel ranks make every comparison stop
    // at the first sentinel reached, which realizes the per-read ordering.
    let base_offset = (m + 1) as u32;
    let mut text = Vec::with_capacity(n + 1);
    let mut read_of = Vec::with_capacity(n);
    let mut read_starts = Vec::with_capacity(m);
    for (j, read) in rc.reads().iter().enumerate() {
        read_starts.push(text.len());
        for &b in read {
            let code = sym_code(b).expect("collection validated on construction") as u32;
            text.push(base_offset + code - 1);
            read_of.push(j as u32);
        }
        text.push(j as u32 + 1);
        read_of.push(j as u32);
    }
    text.push(0);

    let sa = sais::suffix_array(&text, m + 6);
    debug_assert_eq!(sa.first(), Some(&(n as u32)));
    let lcp_full = sais::kasai_lcp(&text, &sa);

    let mut ebwt = vec![0u8; n];
    let mut qs = vec![0u8; n];
    let mut lcp = vec![0u32; n];
    let mut dollar_read = Vec::with_capacity(m);
    for i in 0..n {
        let p = sa[i + 1] as usize;
        let j = read_of[p] as usize;
        let offset = p - read_starts[j];
        if offset == 0 {
            ebwt[i] = SENTINEL;
            qs[i] = QS_PLACEHOLDER;
            dollar_read.push(j as u32);
        } else {
            ebwt[i] = rc.read(j)[offset - 1];
            qs[i] = rc.qual(j)[offset - 1];
        }
        // LCP against the previous row; row 0 keeps the defined value 0.
        if i > 0 {
            lcp[i] = lcp_full[i + 1];
        }
    }

    EbwtIndex::from_parts(ebwt, qs, lcp, Some(dollar_read))
}
