//! Positional clusters: maximal transform intervals that sit between local
//! minima of the LCP array and whose interior LCP values reach the minimum
//! context length `k_m`.
//!
//! Two bitvectors drive the detection. With 1-based logical indices,
//! `B_thr[i] = 1` iff `lcp[i] >= k_m`, and `B_min[i] = 1` iff `lcp[i]` is a
//! local minimum (`lcp[i-1] > lcp[i] <= lcp[i+1]`, virtual `lcp[N+1] = 0`). A
//! cluster `[i, j]` is a maximal interval with `B_thr[r] = 1` and
//! `B_min[r] = 0` for all `i < r <= j`. Intervals whose definition would hold
//! vacuously (no interior position) are not emitted, so every cluster spans
//! at least two rows.

/// A cluster as a half-open, 0-based row range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cluster {
    pub start: usize,
    pub end: usize,
}

impl Cluster {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(end >= start + 2, "clusters span at least two rows");
        Self { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }

    pub fn rows(&self) -> std::ops::Range<usize> {
        self.start..self.end
    }
}

/// Ordered, pairwise-disjoint clusters detected at a given `k_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterSet {
    clusters: Vec<Cluster>,
    k_m: u32,
}

impl ClusterSet {
    pub fn k_m(&self) -> u32 {
        self.k_m
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Cluster> {
        self.clusters.iter()
    }

    pub fn as_slice(&self) -> &[Cluster] {
        &self.clusters
    }
}

impl<'a> IntoIterator for &'a ClusterSet {
    type Item = &'a Cluster;
    type IntoIter = std::slice::Iter<'a, Cluster>;

    fn into_iter(self) -> Self::IntoIter {
        self.clusters.iter()
    }
}

/// Threshold and local-minimum bitvectors for an LCP array (0-based; entry
/// `i` here corresponds to logical index `i + 1`).
pub fn compute_bitvectors(lcp: &[u32], k_m: u32) -> (Vec<bool>, Vec<bool>) {
    let n = lcp.len();
    let at = |i: usize| if i < n { lcp[i] } else { 0 };
    let mut b_thr = vec![false; n];
    let mut b_min = vec![false; n];
    for i in 0..n {
        b_thr[i] = lcp[i] >= k_m;
        b_min[i] = i > 0 && lcp[i - 1] > lcp[i] && lcp[i] <= at(i + 1);
    }
    (b_thr, b_min)
}

/// Enumerate maximal clusters from the two bitvectors.
pub fn enumerate_clusters(b_thr: &[bool], b_min: &[bool], k_m: u32) -> ClusterSet {
    assert_eq!(b_thr.len(), b_min.len());
    let qualifies = (0..b_thr.len()).map(|i| b_thr[i] && !b_min[i]);
    clusters_from_flags(qualifies, k_m)
}

/// Single-pass detection straight from LCP values, without materializing the
/// bitvectors. Accepts any value stream (e.g. an LCP file reader); needs one
/// value of lookahead.
pub fn clusters_from_lcp<I>(lcp: I, k_m: u32) -> ClusterSet
where
    I: IntoIterator<Item = u32>,
{
    let mut iter = lcp.into_iter();
    let Some(first) = iter.next() else {
        return ClusterSet {
            clusters: Vec::new(),
            k_m,
        };
    };

    // Window of (previous, current); `next` is peeked with a virtual
    // trailing 0.
    let mut flags = Vec::new();
    let mut prev = first;
    flags.push(first >= k_m); // index 0: never a local minimum
    let mut cur = iter.next();
    while let Some(value) = cur {
        let next = iter.next();
        let is_min = prev > value && value <= next.unwrap_or(0);
        flags.push(value >= k_m && !is_min);
        prev = value;
        cur = next;
    }
    clusters_from_flags(flags, k_m)
}

/// Interior positions (index >= 1) that qualify form runs; a run `[a, b]`
/// yields the cluster `[a - 1, b]` (inclusive), i.e. `[a - 1, b + 1)`.
fn clusters_from_flags<I>(qualifies: I, k_m: u32) -> ClusterSet
where
    I: IntoIterator<Item = bool>,
{
    let mut clusters = Vec::new();
    let mut run_start: Option<usize> = None;
    let mut len = 0usize;
    for (i, ok) in qualifies.into_iter().enumerate() {
        len = i + 1;
        if i > 0 && ok {
            run_start.get_or_insert(i);
        } else if let Some(a) = run_start.take() {
            clusters.push(Cluster::new(a - 1, i));
        }
    }
    if let Some(a) = run_start {
        clusters.push(Cluster::new(a - 1, len));
    }
    ClusterSet { clusters, k_m }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE_LCP: [u32; 32] = [
        0, 0, 0, 0, 1, 2, 2, 4, 1, 1, 0, 1, 1, 1, 3, 2, 4, 0, 2, 1, 5, 1, 6, 2, 3, 1, 3, 0, 0, 1,
        3, 2,
    ];

    /// 1-based inclusive interval, as printed in worked examples.
    fn iv(start: usize, end: usize) -> Cluster {
        Cluster::new(start - 1, end)
    }

    #[test]
    fn worked_example_bitvectors() {
        let (b_thr, b_min) = compute_bitvectors(&EXAMPLE_LCP, 2);
        let expected_thr: [u8; 32] = [
            0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 0, 1, 0, 0,
            0, 1, 1,
        ];
        let expected_min: [u8; 32] = [
            0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0,
            0, 0, 0,
        ];
        assert_eq!(b_thr, expected_thr.map(|v| v == 1));
        assert_eq!(b_min, expected_min.map(|v| v == 1));
        // Spot values with 1-based indices: B_thr[8], B_min[9], B_min[16],
        // B_thr[16].
        assert!(b_thr[7]);
        assert!(b_min[8]);
        assert!(b_min[15]);
        assert!(b_thr[15]);
    }

    #[test]
    fn worked_example_clusters() {
        let (b_thr, b_min) = compute_bitvectors(&EXAMPLE_LCP, 2);
        let set = enumerate_clusters(&b_thr, &b_min, 2);
        let expected = [
            iv(5, 8),
            iv(14, 15),
            iv(16, 17),
            iv(18, 19),
            iv(20, 21),
            iv(22, 23),
            iv(24, 25),
            iv(26, 27),
            iv(30, 32),
        ];
        assert_eq!(set.as_slice(), &expected);
    }

    #[test]
    fn flat_lcp_yields_nothing() {
        let lcp = vec![0u32; 16];
        let (b_thr, b_min) = compute_bitvectors(&lcp, 1);
        assert!(b_thr.iter().all(|&v| !v));
        assert!(b_min.iter().all(|&v| !v));
        assert!(enumerate_clusters(&b_thr, &b_min, 1).is_empty());
    }

    #[test]
    fn local_minimum_needs_strict_left_descent() {
        // Only the first 3 is a minimum: strict > on the left, <= right.
        let lcp = [0, 5, 3, 3, 5, 0];
        let (_, b_min) = compute_bitvectors(&lcp, 1);
        assert_eq!(b_min, [false, false, true, false, false, true]);
    }

    #[test]
    fn degenerate_all_pass_is_one_cluster() {
        let b_thr = vec![true; 8];
        let b_min = vec![false; 8];
        let set = enumerate_clusters(&b_thr, &b_min, 1);
        assert_eq!(set.as_slice(), &[Cluster::new(0, 8)]);
    }

    #[test]
    fn streaming_matches_two_step() {
        let (b_thr, b_min) = compute_bitvectors(&EXAMPLE_LCP, 2);
        assert_eq!(
            clusters_from_lcp(EXAMPLE_LCP.iter().copied(), 2),
            enumerate_clusters(&b_thr, &b_min, 2)
        );
    }

    #[test]
    fn raising_k_m_never_enlarges_clusters() {
        for k in 2..6u32 {
            let low = clusters_from_lcp(EXAMPLE_LCP.iter().copied(), k);
            let high = clusters_from_lcp(EXAMPLE_LCP.iter().copied(), k + 1);
            for c in &high {
                assert!(
                    low.iter().any(|d| d.start <= c.start && c.end <= d.end),
                    "cluster {c:?} at k_m={} not contained at k_m={k}",
                    k + 1
                );
            }
        }
    }
}
