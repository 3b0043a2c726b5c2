//! Reference-free lossy FASTQ preprocessing built on the extended
//! Burrows-Wheeler transform.
//!
//! The pipeline: parse FASTQ ([`fastq`]), build the transform with its
//! permuted quality stream and LCP array ([`ebwt`]), detect positional
//! clusters between LCP local minima ([`cluster`]), replace noisy bases and
//! smooth quality scores inside clusters ([`smoothing`]), invert the
//! transform to a modified FASTQ ([`reconstruct`]), and measure the outcome
//! through a pluggable compression backend ([`codec`]). [`metrics`] compares
//! variant call sets produced from original and modified data.
//!
//! The `parallel` feature (on by default) processes clusters and per-read
//! inversion walks with rayon; the sequential fallbacks produce identical
//! output.

pub mod cluster;
pub mod codec;
pub mod ebwt;
pub mod fastq;
pub mod metrics;
pub mod reconstruct;
pub mod smoothing;

pub use cluster::{clusters_from_lcp, Cluster, ClusterSet};
pub use ebwt::{build_index, export_index, import_index, EbwtIndex};
pub use fastq::{parse_fastq, write_fastq, HeaderPolicy, ReadCollection};
pub use reconstruct::{invert, Headers};
pub use smoothing::{run_smoothing, EditOverlay, QStrategy, SmoothingConfig};
