//! Variant-set comparison: TP/FP/FN counts and the precision, sensitivity,
//! and F-measure derived from them.
//!
//! Matching is exact on `(chrom, pos, ref, alt)`. Inputs are either minimal
//! tab-separated `chrom pos ref alt` lines or VCF bodies ('#' lines skipped,
//! columns 1, 2, 4, 5; multi-allelic ALT fields are split on ',').

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("line {line}: expected at least 4 tab-separated fields")]
    ShortRecord { line: usize },
    #[error("line {line}: position `{text}` is not a positive integer")]
    BadPosition { line: usize, text: String },
    #[error("line {line}: allele `{text}` is empty or outside {{A,C,G,T,N}}")]
    BadAllele { line: usize, text: String },
}

/// One variant record.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Variant {
    pub chrom: String,
    pub pos: u64,
    pub ref_allele: String,
    pub alt_allele: String,
}

fn normalize_allele(raw: &str, line: usize) -> Result<String, MetricsError> {
    let allele = raw.to_ascii_uppercase();
    if allele.is_empty() || !allele.bytes().all(|b| b"ACGTN".contains(&b)) {
        return Err(MetricsError::BadAllele {
            line,
            text: raw.to_string(),
        });
    }
    Ok(allele)
}

/// A deduplicated set of variants.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VariantSet {
    records: BTreeSet<Variant>,
}

impl VariantSet {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn insert(&mut self, variant: Variant) {
        self.records.insert(variant);
    }

    pub fn iter(&self) -> impl Iterator<Item = &Variant> {
        self.records.iter()
    }

    pub fn from_variants<I: IntoIterator<Item = Variant>>(variants: I) -> Self {
        Self {
            records: variants.into_iter().collect(),
        }
    }

    /// Tolerant text reader covering both supported layouts. '#' lines are
    /// skipped; a data line with exactly 4 fields is read as
    /// `chrom pos ref alt`, one with 5 or more as a VCF body line
    /// (`chrom pos id ref alt ...`). ALT fields split on ','.
    pub fn from_text(input: &str) -> Result<Self, MetricsError> {
        let mut set = VariantSet::default();
        for (idx, raw_line) in input.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw_line.trim_end();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split('\t').collect();
            let (chrom, pos_text, ref_text, alt_text) = match fields.len() {
                0..=3 => return Err(MetricsError::ShortRecord { line }),
                4 => (fields[0], fields[1], fields[2], fields[3]),
                _ => (fields[0], fields[1], fields[3], fields[4]),
            };
            let pos: u64 = pos_text
                .parse()
                .ok()
                .filter(|&p| p >= 1)
                .ok_or_else(|| MetricsError::BadPosition {
                    line,
                    text: pos_text.to_string(),
                })?;
            let ref_allele = normalize_allele(ref_text, line)?;
            for alt in alt_text.split(',') {
                set.insert(Variant {
                    chrom: chrom.to_string(),
                    pos,
                    ref_allele: ref_allele.clone(),
                    alt_allele: normalize_allele(alt, line)?,
                });
            }
        }
        Ok(set)
    }
}

/// Outcome of comparing a query call set against a baseline.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct Comparison {
    pub true_positives: u64,
    pub false_positives: u64,
    pub false_negatives: u64,
    pub precision: f64,
    pub sensitivity: f64,
    pub f_measure: f64,
}

/// Exact-match set comparison.
///
/// `PREC = TP/(TP+FP)`, `SEN = TP/(TP+FN)`, `F = 2*SEN*PREC/(SEN+PREC)`.
/// Conventions: precision is 1 for an empty query, sensitivity is 1 for an
/// empty baseline, and F is 0 when precision and sensitivity are both 0.
pub fn compare(baseline: &VariantSet, query: &VariantSet) -> Comparison {
    let tp = query.records.intersection(&baseline.records).count() as u64;
    let fp = query.len() as u64 - tp;
    let fn_count = baseline.len() as u64 - tp;

    let precision = if tp + fp == 0 {
        1.0
    } else {
        tp as f64 / (tp + fp) as f64
    };
    let sensitivity = if tp + fn_count == 0 {
        1.0
    } else {
        tp as f64 / (tp + fn_count) as f64
    };
    let f_measure = if precision + sensitivity == 0.0 {
        0.0
    } else {
        2.0 * sensitivity * precision / (sensitivity + precision)
    };

    Comparison {
        true_positives: tp,
        false_positives: fp,
        false_negatives: fn_count,
        precision,
        sensitivity,
        f_measure,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(chrom: &str, pos: u64, r: &str, a: &str) -> Variant {
        Variant {
            chrom: chrom.to_string(),
            pos,
            ref_allele: r.to_string(),
            alt_allele: a.to_string(),
        }
    }

    #[test]
    fn identical_sets_score_one() {
        let set = VariantSet::from_variants([v("chr1", 5, "A", "T"), v("chr2", 9, "G", "C")]);
        let cmp = compare(&set, &set);
        assert_eq!(cmp.true_positives, 2);
        assert_eq!((cmp.false_positives, cmp.false_negatives), (0, 0));
        assert_eq!((cmp.precision, cmp.sensitivity, cmp.f_measure), (1.0, 1.0, 1.0));
    }

    #[test]
    fn one_in_one_out() {
        let baseline =
            VariantSet::from_variants([v("1", 1, "A", "T"), v("1", 2, "A", "T"), v("1", 3, "A", "T")]);
        let query =
            VariantSet::from_variants([v("1", 1, "A", "T"), v("1", 2, "A", "T"), v("1", 4, "A", "T")]);
        let cmp = compare(&baseline, &query);
        assert_eq!(cmp.true_positives, 2);
        assert_eq!(cmp.false_positives, 1);
        assert_eq!(cmp.false_negatives, 1);
        assert!((cmp.precision - 2.0 / 3.0).abs() < 1e-15);
        assert!((cmp.sensitivity - 2.0 / 3.0).abs() < 1e-15);
        assert!((cmp.f_measure - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn half_subset_query() {
        let baseline = VariantSet::from_variants((1..=10).map(|p| v("1", p, "A", "T")));
        let query = VariantSet::from_variants((1..=5).map(|p| v("1", p, "A", "T")));
        let cmp = compare(&baseline, &query);
        assert_eq!(cmp.precision, 1.0);
        assert_eq!(cmp.sensitivity, 0.5);
        assert!((cmp.f_measure - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn empty_set_conventions() {
        let empty = VariantSet::default();
        let some = VariantSet::from_variants([v("1", 1, "A", "T")]);
        let cmp = compare(&some, &empty);
        assert_eq!(cmp.precision, 1.0);
        assert_eq!(cmp.sensitivity, 0.0);
        assert_eq!(cmp.f_measure, 0.0);
        let cmp = compare(&empty, &some);
        assert_eq!(cmp.precision, 0.0);
        assert_eq!(cmp.sensitivity, 1.0);
        let cmp = compare(&empty, &empty);
        assert_eq!((cmp.precision, cmp.sensitivity, cmp.f_measure), (1.0, 1.0, 1.0));
    }

    #[test]
    fn swapping_sides_swaps_prec_and_sen() {
        let baseline = VariantSet::from_variants((1..=8).map(|p| v("1", p, "A", "T")));
        let query = VariantSet::from_variants((5..=14).map(|p| v("1", p, "A", "T")));
        let ab = compare(&baseline, &query);
        let ba = compare(&query, &baseline);
        assert_eq!(ab.precision, ba.sensitivity);
        assert_eq!(ab.sensitivity, ba.precision);
        assert_eq!(ab.f_measure, ba.f_measure);
    }

    #[test]
    fn reads_tsv_lines() {
        let set = VariantSet::from_text("chr1\t100\tA\tT\nchr1\t200\tg\tc\n").unwrap();
        assert_eq!(set.len(), 2);
        assert!(set.iter().any(|r| r.ref_allele == "G" && r.alt_allele == "C"));
    }

    #[test]
    fn reads_vcf_body() {
        let vcf = "##fileformat=VCFv4.2\n#CHROM\tPOS\tID\tREF\tALT\tQUAL\tFILTER\tINFO\n\
                   chr20\t1234\t.\tA\tT\t50\tPASS\t.\n\
                   chr20\t5678\trs1\tC\tG,A\t99\tPASS\t.\n";
        let set = VariantSet::from_text(vcf).unwrap();
        assert_eq!(set.len(), 3); // the multi-allelic line splits in two
        assert!(set.iter().any(|r| r.pos == 5678 && r.alt_allele == "A"));
    }

    #[test]
    fn malformed_records_are_rejected() {
        assert!(matches!(
            VariantSet::from_text("chr1\t100\tA\n"),
            Err(MetricsError::ShortRecord { line: 1 })
        ));
        assert!(matches!(
            VariantSet::from_text("chr1\tzero\tA\tT\n"),
            Err(MetricsError::BadPosition { line: 1, .. })
        ));
        assert!(matches!(
            VariantSet::from_text("chr1\t5\tA\t<DEL>\n"),
            Err(MetricsError::BadAllele { line: 1, .. })
        ));
        assert!(matches!(
            VariantSet::from_text("chr1\t0\tA\tT\n"),
            Err(MetricsError::BadPosition { line: 1, .. })
        ));
    }

    #[test]
    fn duplicate_records_collapse() {
        let set = VariantSet::from_text("1\t7\tA\tT\n1\t7\tA\tT\n").unwrap();
        assert_eq!(set.len(), 1);
    }
}
