//! Shared test support: an independent naive oracle for the transform and
//! collection generators.
//!
//! The oracle sorts all suffixes by explicit element-wise comparison with
//! indexed sentinels and never touches the library's construction path.

#![allow(dead_code)]

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use fqsmooth_core::fastq::ReadCollection;

/// One comparison element of a suffix: the sentinel of read `j` sorts below
/// every base, and sentinels order among themselves by read index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Elem {
    Sentinel(u32),
    Base(u8),
}

fn elem(rc: &ReadCollection, read: usize, offset: usize) -> Elem {
    let r = rc.read(read);
    if offset == r.len() {
        Elem::Sentinel(read as u32)
    } else {
        Elem::Base(r[offset])
    }
}

fn cmp_suffixes(rc: &ReadCollection, a: (usize, usize), b: (usize, usize)) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    let mut t = 0usize;
    loop {
        let ea = elem(rc, a.0, a.1 + t);
        let eb = elem(rc, b.0, b.1 + t);
        match ea.cmp(&eb) {
            Ordering::Equal => {
                if matches!(ea, Elem::Sentinel(_)) {
                    return Ordering::Equal; // identical suffix
                }
                t += 1;
            }
            other => return other,
        }
    }
}

/// What precedes a transform row in its read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pred {
    /// The row holds the end-marker of this read.
    Marker { read: usize },
    /// The row holds `reads[read][offset]`.
    Base { read: usize, offset: usize },
}

/// Brute-force transform of a collection.
pub struct NaiveIndex {
    /// Sorted suffixes as (read, offset) pairs; offset == read length means
    /// the sentinel-only suffix.
    pub order: Vec<(usize, usize)>,
    pub ebwt: Vec<u8>,
    pub qs: Vec<u8>,
    pub lcp: Vec<u32>,
    /// Read terminated by each '$' occurrence, in transform order.
    pub dollar_read: Vec<u32>,
    /// Source position of each row's symbol.
    pub pred: Vec<Pred>,
}

pub fn naive_index(rc: &ReadCollection) -> NaiveIndex {
    let mut order = Vec::new();
    for (j, read) in rc.reads().iter().enumerate() {
        for k in 0..=read.len() {
            order.push((j, k));
        }
    }
    order.sort_by(|&a, &b| cmp_suffixes(rc, a, b));

    let n = order.len();
    let mut ebwt = Vec::with_capacity(n);
    let mut qs = Vec::with_capacity(n);
    let mut dollar_read = Vec::new();
    let mut pred = Vec::with_capacity(n);
    for &(j, k) in &order {
        if k == 0 {
            ebwt.push(b'$');
            qs.push(b'!');
            dollar_read.push(j as u32);
            pred.push(Pred::Marker { read: j });
        } else {
            ebwt.push(rc.read(j)[k - 1]);
            qs.push(rc.qual(j)[k - 1]);
            pred.push(Pred::Base {
                read: j,
                offset: k - 1,
            });
        }
    }

    let mut lcp = vec![0u32; n];
    for i in 1..n {
        let (aj, ak) = order[i - 1];
        let (bj, bk) = order[i];
        let mut t = 0usize;
        loop {
            let ea = elem(rc, aj, ak + t);
            let eb = elem(rc, bj, bk + t);
            // Matching prefix elements are always bases: distinct suffixes
            // can never agree on a sentinel.
            if ea == eb && matches!(ea, Elem::Base(_)) {
                t += 1;
            } else {
                break;
            }
        }
        lcp[i] = t as u32;
    }

    NaiveIndex {
        order,
        ebwt,
        qs,
        lcp,
        dollar_read,
        pred,
    }
}

pub const EXAMPLE_READS: [&str; 3] = ["GGCGTACCA", "GGGGCGTAT", "ACGANTACGAC"];

pub fn collection(reads: &[&str], quals: &[&str]) -> ReadCollection {
    ReadCollection::new(
        reads.iter().map(|r| r.as_bytes().to_vec()).collect(),
        quals.iter().map(|q| q.as_bytes().to_vec()).collect(),
        (0..reads.len())
            .map(|i| format!("read{i}").into_bytes())
            .collect(),
    )
    .unwrap()
}

/// The worked three-read collection with uniform 'I' qualities.
pub fn worked_example() -> ReadCollection {
    let quals: Vec<String> = EXAMPLE_READS.iter().map(|r| "I".repeat(r.len())).collect();
    let quals: Vec<&str> = quals.iter().map(String::as_str).collect();
    collection(&EXAMPLE_READS, &quals)
}

/// The worked example with one overridden quality byte at (read, offset).
pub fn worked_example_with_qual(read: usize, offset: usize, qual: u8) -> ReadCollection {
    let rc = worked_example();
    let mut quals: Vec<Vec<u8>> = rc.quals().to_vec();
    quals[read][offset] = qual;
    ReadCollection::new(rc.reads().to_vec(), quals, rc.headers().to_vec()).unwrap()
}

/// Uniform random reads over ACGTN with arbitrary printable qualities.
pub fn random_collection(rng: &mut ChaCha8Rng, max_reads: usize, max_len: usize) -> ReadCollection {
    let m = rng.random_range(1..=max_reads);
    let mut reads = Vec::with_capacity(m);
    let mut quals = Vec::with_capacity(m);
    for _ in 0..m {
        let len = rng.random_range(1..=max_len);
        reads.push(
            (0..len)
                .map(|_| b"ACGTN"[rng.random_range(0..5)])
                .collect::<Vec<u8>>(),
        );
        quals.push(
            (0..len)
                .map(|_| rng.random_range(33..=126))
                .collect::<Vec<u8>>(),
        );
    }
    let headers = (0..m).map(|i| format!("r{i}").into_bytes()).collect();
    ReadCollection::new(reads, quals, headers).unwrap()
}

/// Overlapping reads sampled from a random genome with sequencing-style
/// noise: substitution errors carry low quality, correct calls high quality.
/// This shape produces genuine positional clusters.
pub fn sampled_collection(
    rng: &mut ChaCha8Rng,
    num_reads: usize,
    read_len: usize,
    error_rate: f64,
) -> ReadCollection {
    let genome_len = ((num_reads * read_len) / 8).max(read_len * 2);
    let genome: Vec<u8> = (0..genome_len)
        .map(|_| b"ACGT"[rng.random_range(0..4)])
        .collect();

    let mut reads = Vec::with_capacity(num_reads);
    let mut quals = Vec::with_capacity(num_reads);
    for _ in 0..num_reads {
        let len = read_len.min(genome_len - 1);
        let start = rng.random_range(0..=genome_len - len);
        let mut read = genome[start..start + len].to_vec();
        let mut qual = vec![0u8; len];
        for (b, q) in read.iter_mut().zip(&mut qual) {
            if rng.random_bool(error_rate) {
                *b = if rng.random_bool(0.1) {
                    b'N'
                } else {
                    b"ACGT"[rng.random_range(0..4)]
                };
                *q = 33 + rng.random_range(2..15);
            } else {
                *q = 33 + rng.random_range(25..=40);
            }
        }
        reads.push(read);
        quals.push(qual);
    }
    let headers = (0..num_reads)
        .map(|i| format!("r{i}").into_bytes())
        .collect();
    ReadCollection::new(reads, quals, headers).unwrap()
}
