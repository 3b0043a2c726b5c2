//! Per-cluster noise reduction and quality-score smoothing.
//!
//! Inside every positional cluster we count base symbols ('$' excluded), mark
//! as *frequent* the symbols whose share of the cluster exceeds a threshold,
//! and as *noisy* the non-frequent symbols whose every occurrence carries a
//! low quality score. Noisy bases are rewritten to a frequent symbol when the
//! cluster supports an unambiguous prediction; quality scores are smoothed to
//! a per-cluster value `Q`. All edits are collected in a sparse overlay keyed
//! by transform position and applied later during reconstruction.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::cluster::{Cluster, ClusterSet};
use crate::ebwt::{EbwtIndex, SENTINEL};
use crate::fastq::HeaderPolicy;

/// How the replacement quality `Q` of a cluster is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QStrategy {
    /// A fixed configured value.
    #[default]
    Constant,
    /// The quality encoding the mean error probability of the cluster.
    MeanErr,
    /// The maximum quality in the cluster.
    Max,
    /// The rounded arithmetic mean of the quality bytes in the cluster.
    Avg,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("minimum context length must be >= 1")]
    BadMinContext,
    #[error("frequency threshold {0} outside the open interval (0, 1)")]
    BadFreqThreshold(f64),
    #[error("left-context length must be >= 1")]
    BadContextLen,
    #[error("quality byte {0:#04x} outside printable range 33..=126")]
    BadQualityByte(u8),
}

/// Tuning knobs for clustering and smoothing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingConfig {
    /// Minimum shared-context length `k_m` for cluster detection.
    pub k_m: u32,
    pub q_strategy: QStrategy,
    /// Replacement value under [`QStrategy::Constant`].
    pub q_const: u8,
    /// A symbol is frequent when `count / cluster_bases` strictly exceeds
    /// this fraction.
    pub freq_threshold: f64,
    /// Left-context length used to disambiguate between two frequent symbols.
    pub ell: usize,
    /// A quality is "low" when strictly below this byte.
    pub noise_q_threshold: u8,
    /// Quantize the output quality stream to the 8-level table.
    pub binning: bool,
    /// Enable base replacement (noise reduction); quality smoothing always
    /// runs.
    pub base_edits: bool,
    pub header_policy: HeaderPolicy,
}

impl Default for SmoothingConfig {
    fn default() -> Self {
        Self {
            k_m: 30,
            q_strategy: QStrategy::Constant,
            q_const: b'@',
            freq_threshold: 0.40,
            ell: 1,
            noise_q_threshold: b'5', // Phred 20
            binning: false,
            base_edits: true,
            header_policy: HeaderPolicy::Strip,
        }
    }
}

impl SmoothingConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.k_m < 1 {
            return Err(ConfigError::BadMinContext);
        }
        if !(self.freq_threshold > 0.0 && self.freq_threshold < 1.0) {
            return Err(ConfigError::BadFreqThreshold(self.freq_threshold));
        }
        if self.ell < 1 {
            return Err(ConfigError::BadContextLen);
        }
        for byte in [self.q_const, self.noise_q_threshold] {
            if !(33..=126).contains(&byte) {
                return Err(ConfigError::BadQualityByte(byte));
            }
        }
        Ok(())
    }
}

/// Sparse edits keyed by transform position, applied at reconstruction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EditOverlay {
    pub base_edits: BTreeMap<usize, u8>,
    pub qual_edits: BTreeMap<usize, u8>,
}

impl EditOverlay {
    pub fn is_empty(&self) -> bool {
        self.base_edits.is_empty() && self.qual_edits.is_empty()
    }

    /// Absorb a fragment from a disjoint cluster.
    fn merge(&mut self, other: EditOverlay) {
        let bases = self.base_edits.len() + other.base_edits.len();
        let quals = self.qual_edits.len() + other.qual_edits.len();
        self.base_edits.extend(other.base_edits);
        self.qual_edits.extend(other.qual_edits);
        debug_assert_eq!(self.base_edits.len(), bases, "overlapping cluster edits");
        debug_assert_eq!(self.qual_edits.len(), quals, "overlapping cluster edits");
    }
}

const BASE_SYMBOLS: [u8; 5] = *b"ACGNT";

fn base_code(b: u8) -> Option<usize> {
    BASE_SYMBOLS.iter().position(|&s| s == b)
}

const QUAL_SPAN: usize = 94; // printable bytes 33..=126

/// Symbol and quality statistics of one cluster. '$' rows are excluded from
/// every count.
#[derive(Debug, Clone)]
pub struct ClusterProfile {
    interval: Cluster,
    counts: [u32; 5],
    max_qual: [u8; 5],
    qual_hist: [u32; QUAL_SPAN],
    total: u32,
    frequent: Vec<u8>,
}

impl ClusterProfile {
    pub fn interval(&self) -> Cluster {
        self.interval
    }

    /// Non-'$' symbols in the cluster.
    pub fn total_bases(&self) -> u32 {
        self.total
    }

    pub fn count_of(&self, base: u8) -> u32 {
        base_code(base).map_or(0, |c| self.counts[c])
    }

    /// Frequent symbols in `A C G N T` order.
    pub fn frequent(&self) -> &[u8] {
        &self.frequent
    }

    pub fn is_frequent(&self, base: u8) -> bool {
        self.frequent.contains(&base)
    }

    /// Highest quality byte attached to `base` inside the cluster, if the
    /// base occurs at all.
    pub fn max_quality(&self, base: u8) -> Option<u8> {
        let code = base_code(base)?;
        (self.counts[code] > 0).then_some(self.max_qual[code])
    }
}

/// Collect the statistics of one cluster.
pub fn profile_cluster(
    index: &EbwtIndex,
    interval: Cluster,
    cfg: &SmoothingConfig,
) -> ClusterProfile {
    let mut counts = [0u32; 5];
    let mut max_qual = [0u8; 5];
    let mut qual_hist = [0u32; QUAL_SPAN];
    for pos in interval.rows() {
        let sym = index.symbol(pos);
        if sym == SENTINEL {
            continue;
        }
        let code = base_code(sym).expect("transform symbols are validated");
        let qual = index.quality(pos);
        counts[code] += 1;
        max_qual[code] = max_qual[code].max(qual);
        qual_hist[(qual - 33) as usize] += 1;
    }
    let total: u32 = counts.iter().sum();
    let frequent = BASE_SYMBOLS
        .iter()
        .enumerate()
        .filter(|&(code, _)| {
            total > 0 && counts[code] as f64 / total as f64 > cfg.freq_threshold
        })
        .map(|(_, &sym)| sym)
        .collect();
    ClusterProfile {
        interval,
        counts,
        max_qual,
        qual_hist,
        total,
        frequent,
    }
}

/// Symbols of the cluster that are candidates for replacement: non-frequent,
/// present, and low-quality at every occurrence.
pub fn detect_noisy(profile: &ClusterProfile, cfg: &SmoothingConfig) -> Vec<u8> {
    BASE_SYMBOLS
        .iter()
        .copied()
        .filter(|&b| !profile.is_frequent(b))
        .filter(|&b| {
            profile
                .max_quality(b)
                .is_some_and(|q| q < cfg.noise_q_threshold)
        })
        .collect()
}

/// Left contexts (length `ell`, possibly truncated at read starts) of every
/// occurrence of `sym` in the cluster.
fn context_set(index: &EbwtIndex, interval: Cluster, sym: u8, ell: usize) -> BTreeSet<Vec<u8>> {
    interval
        .rows()
        .filter(|&pos| index.symbol(pos) == sym)
        .map(|pos| index.left_context(pos, ell))
        .collect()
}

fn predict_from_contexts(
    index: &EbwtIndex,
    pos: usize,
    ell: usize,
    first: u8,
    second: u8,
    ctx_first: &BTreeSet<Vec<u8>>,
    ctx_second: &BTreeSet<Vec<u8>>,
) -> Option<u8> {
    let gamma = index.left_context(pos, ell);
    if gamma.len() < ell {
        return None; // truncated at a read start
    }
    if ctx_first == ctx_second {
        return None; // the frequent symbols are indistinguishable by context
    }
    let first_hit = ctx_first.len() == 1 && ctx_first.contains(&gamma);
    let second_hit = ctx_second.len() == 1 && ctx_second.contains(&gamma);
    match (first_hit, second_hit) {
        (true, false) => Some(first),
        (false, true) => Some(second),
        _ => None,
    }
}

/// Replacement for the noisy occurrence at transform position `pos`, decided
/// with that occurrence's own left context.
///
/// With one frequent symbol the answer is that symbol. With two, the
/// occurrence is rewritten to the frequent symbol whose context set is
/// exactly the singleton of this occurrence's context; if both frequent
/// symbols share their context sets, or neither matches, no edit is made.
/// Clusters with zero or more than two frequent symbols never produce edits.
pub fn predict_replacement(
    index: &EbwtIndex,
    profile: &ClusterProfile,
    pos: usize,
    cfg: &SmoothingConfig,
) -> Option<u8> {
    match *profile.frequent() {
        [single] => Some(single),
        [first, second] => {
            let ctx_first = context_set(index, profile.interval(), first, cfg.ell);
            let ctx_second = context_set(index, profile.interval(), second, cfg.ell);
            predict_from_contexts(index, pos, cfg.ell, first, second, &ctx_first, &ctx_second)
        }
        _ => None,
    }
}

fn phred_error(byte: u8) -> f64 {
    10f64.powf(-((byte - 33) as f64) / 10.0)
}

/// Replacement quality for a cluster, or `None` when the cluster holds no
/// bases.
pub fn compute_q(profile: &ClusterProfile, cfg: &SmoothingConfig) -> Option<u8> {
    if profile.total == 0 {
        return None;
    }
    let q = match cfg.q_strategy {
        QStrategy::Constant => cfg.q_const,
        QStrategy::MeanErr => {
            let mut sum = 0f64;
            for (slot, &count) in profile.qual_hist.iter().enumerate() {
                if count > 0 {
                    sum += count as f64 * phred_error(slot as u8 + 33);
                }
            }
            let mean = sum / profile.total as f64;
            // f64::round ties away from zero, which pins the boundary cases.
            let phred = (-10.0 * mean.log10()).round().clamp(0.0, 93.0);
            33 + phred as u8
        }
        QStrategy::Max => {
            let top = profile
                .qual_hist
                .iter()
                .rposition(|&c| c > 0)
                .expect("non-empty profile");
            top as u8 + 33
        }
        QStrategy::Avg => {
            let sum: u64 = profile
                .qual_hist
                .iter()
                .enumerate()
                .map(|(slot, &c)| (slot as u64 + 33) * c as u64)
                .sum();
            (sum as f64 / profile.total as f64).round() as u8
        }
    };
    Some(q)
}

/// 8-level quality quantization: Phred 0..2 pass through, everything else
/// maps to a bin representative.
pub fn apply_binning(qual: u8) -> u8 {
    let phred = qual.saturating_sub(33);
    let binned = match phred {
        0..=1 => phred,
        2..=9 => 6,
        10..=19 => 15,
        20..=24 => 22,
        25..=29 => 27,
        30..=34 => 33,
        35..=39 => 37,
        _ => 40,
    };
    binned + 33
}

/// Edits for one cluster: a quality edit at every non-'$' row whose symbol is
/// frequent or whose quality exceeds `q`, plus base edits for predictable
/// noisy occurrences when enabled.
pub fn smooth_cluster(
    index: &EbwtIndex,
    profile: &ClusterProfile,
    q: u8,
    cfg: &SmoothingConfig,
) -> EditOverlay {
    let mut overlay = EditOverlay::default();
    for pos in profile.interval().rows() {
        let sym = index.symbol(pos);
        if sym == SENTINEL {
            continue;
        }
        if profile.is_frequent(sym) || index.quality(pos) > q {
            overlay.qual_edits.insert(pos, q);
        }
    }

    if cfg.base_edits && matches!(profile.frequent().len(), 1 | 2) {
        let noisy = detect_noisy(profile, cfg);
        if !noisy.is_empty() {
            let contexts = match *profile.frequent() {
                [first, second] => Some((
                    context_set(index, profile.interval(), first, cfg.ell),
                    context_set(index, profile.interval(), second, cfg.ell),
                )),
                _ => None,
            };
            for pos in profile.interval().rows() {
                let sym = index.symbol(pos);
                if !noisy.contains(&sym) {
                    continue;
                }
                let replacement = match (profile.frequent(), &contexts) {
                    (&[single], None) => Some(single),
                    (&[first, second], Some((ctx_first, ctx_second))) => predict_from_contexts(
                        index, pos, cfg.ell, first, second, ctx_first, ctx_second,
                    ),
                    _ => None,
                };
                if let Some(r) = replacement {
                    overlay.base_edits.insert(pos, r);
                }
            }
        }
    }
    overlay
}

fn cluster_fragment(index: &EbwtIndex, cluster: Cluster, cfg: &SmoothingConfig) -> EditOverlay {
    let profile = profile_cluster(index, cluster, cfg);
    if profile.total_bases() == 0 {
        return EditOverlay::default(); // cluster of end-markers only
    }
    let q = compute_q(&profile, cfg).expect("profile with bases");
    smooth_cluster(index, &profile, q, cfg)
}

/// Re-quantize every quality position; keep an edit only where the binned
/// value differs from the stored original.
fn rebin_overlay(index: &EbwtIndex, overlay: &mut EditOverlay) {
    let mut binned = BTreeMap::new();
    for pos in 0..index.len() {
        if index.symbol(pos) == SENTINEL {
            continue;
        }
        let original = index.quality(pos);
        let effective = overlay.qual_edits.get(&pos).copied().unwrap_or(original);
        let target = apply_binning(effective);
        if target != original {
            binned.insert(pos, target);
        }
    }
    overlay.qual_edits = binned;
}

/// Smooth every cluster sequentially and produce the merged overlay. With
/// binning enabled the quantization pass runs afterwards over all positions,
/// touched or not.
pub fn run_smoothing_seq(
    index: &EbwtIndex,
    clusters: &ClusterSet,
    cfg: &SmoothingConfig,
) -> EditOverlay {
    let mut overlay = EditOverlay::default();
    for cluster in clusters {
        overlay.merge(cluster_fragment(index, *cluster, cfg));
    }
    if cfg.binning {
        rebin_overlay(index, &mut overlay);
    }
    overlay
}

/// Like [`run_smoothing_seq`] but processing clusters in parallel; clusters
/// are disjoint and fragments are merged in cluster order, so the result is
/// identical.
#[cfg(feature = "parallel")]
pub fn run_smoothing_par(
    index: &EbwtIndex,
    clusters: &ClusterSet,
    cfg: &SmoothingConfig,
) -> EditOverlay {
    let fragments: Vec<EditOverlay> = clusters
        .as_slice()
        .par_iter()
        .map(|cluster| cluster_fragment(index, *cluster, cfg))
        .collect();
    let mut overlay = EditOverlay::default();
    for fragment in fragments {
        overlay.merge(fragment);
    }
    if cfg.binning {
        rebin_overlay(index, &mut overlay);
    }
    overlay
}

/// Smooth every cluster and produce the merged overlay.
pub fn run_smoothing(index: &EbwtIndex, clusters: &ClusterSet, cfg: &SmoothingConfig) -> EditOverlay {
    #[cfg(feature = "parallel")]
    {
        run_smoothing_par(index, clusters, cfg)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_smoothing_seq(index, clusters, cfg)
    }
}
