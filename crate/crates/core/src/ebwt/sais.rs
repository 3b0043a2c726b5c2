//! Suffix-array construction by induced sorting (SA-IS) over integer texts.
//!
//! The builder in the parent module maps each read to integer ranks and gives
//! every end-marker its own rank, so a plain suffix sort of the concatenation
//! realizes the indexed-sentinel ordering. Linear time in text length plus
//! alphabet size.

const EMPTY: u32 = u32::MAX;

/// Suffix array of `text`, whose values must lie in `0..alphabet` and whose
/// last element must be 0, occurring exactly once.
pub(crate) fn suffix_array(text: &[u32], alphabet: usize) -> Vec<u32> {
    debug_assert_eq!(text.last(), Some(&0));
    debug_assert_eq!(text.iter().filter(|&&c| c == 0).count(), 1);
    let mut sa = vec![EMPTY; text.len()];
    sais(text, &mut sa, alphabet);
    sa
}

fn sais(text: &[u32], sa: &mut [u32], alphabet: usize) {
    let n = text.len();
    match n {
        0 => return,
        1 => {
            sa[0] = 0;
            return;
        }
        2 => {
            sa[0] = 1;
            sa[1] = 0;
            return;
        }
        _ => {}
    }

    // Suffix types: S if strictly smaller than the next suffix, L otherwise.
    let mut is_s = vec![false; n];
    is_s[n - 1] = true;
    for i in (0..n - 1).rev() {
        is_s[i] = text[i] < text[i + 1] || (text[i] == text[i + 1] && is_s[i + 1]);
    }
    let is_lms = |i: usize| i > 0 && is_s[i] && !is_s[i - 1];

    let mut bucket_sizes = vec![0u32; alphabet];
    for &c in text {
        bucket_sizes[c as usize] += 1;
    }

    let lms: Vec<u32> = (1..n).filter(|&i| is_lms(i)).map(|i| i as u32).collect();

    // First pass sorts the LMS substrings.
    induce(text, sa, &is_s, &bucket_sizes, &lms);

    let mut sorted_lms: Vec<u32> = sa
        .iter()
        .copied()
        .filter(|&p| p != EMPTY && is_lms(p as usize))
        .collect();
    debug_assert_eq!(sorted_lms.len(), lms.len());

    // Name LMS substrings in sorted order; equal substrings share a name.
    let mut names = vec![EMPTY; n];
    let mut name = 0u32;
    names[sorted_lms[0] as usize] = 0;
    for w in 1..sorted_lms.len() {
        let prev = sorted_lms[w - 1] as usize;
        let cur = sorted_lms[w] as usize;
        if !lms_substring_eq(text, prev, cur, &is_s) {
            name += 1;
        }
        names[cur] = name;
    }

    if ((name + 1) as usize) < lms.len() {
        // Duplicate names: order the LMS suffixes by recursion on the
        // reduced text of names in text order.
        let reduced: Vec<u32> = lms.iter().map(|&p| names[p as usize]).collect();
        let mut reduced_sa = vec![EMPTY; reduced.len()];
        sais(&reduced, &mut reduced_sa, (name + 1) as usize);
        for (w, &r) in reduced_sa.iter().enumerate() {
            sorted_lms[w] = lms[r as usize];
        }
    } else {
        for &p in &lms {
            sorted_lms[names[p as usize] as usize] = p;
        }
    }

    sa.fill(EMPTY);
    induce(text, sa, &is_s, &bucket_sizes, &sorted_lms);
}

/// Place the given LMS suffixes at their bucket tails, then induce L-type
/// suffixes left-to-right and S-type suffixes right-to-left.
fn induce(text: &[u32], sa: &mut [u32], is_s: &[bool], bucket_sizes: &[u32], lms: &[u32]) {
    let n = text.len();

    let mut tails = bucket_tails(bucket_sizes);
    for &p in lms.iter().rev() {
        let c = text[p as usize] as usize;
        tails[c] -= 1;
        sa[tails[c] as usize] = p;
    }

    let mut heads = bucket_heads(bucket_sizes);
    for i in 0..n {
        let p = sa[i];
        if p != EMPTY && p > 0 {
            let j = (p - 1) as usize;
            if !is_s[j] {
                let c = text[j] as usize;
                sa[heads[c] as usize] = j as u32;
                heads[c] += 1;
            }
        }
    }

    let mut tails = bucket_tails(bucket_sizes);
    for i in (0..n).rev() {
        let p = sa[i];
        if p != EMPTY && p > 0 {
            let j = (p - 1) as usize;
            if is_s[j] {
                let c = text[j] as usize;
                tails[c] -= 1;
                sa[tails[c] as usize] = j as u32;
            }
        }
    }
}

fn bucket_heads(sizes: &[u32]) -> Vec<u32> {
    let mut heads = Vec::with_capacity(sizes.len());
    let mut sum = 0u32;
    for &s in sizes {
        heads.push(sum);
        sum += s;
    }
    heads
}

fn bucket_tails(sizes: &[u32]) -> Vec<u32> {
    let mut tails = Vec::with_capacity(sizes.len());
    let mut sum = 0u32;
    for &s in sizes {
        sum += s;
        tails.push(sum);
    }
    tails
}

/// Compare the LMS substrings starting at `a` and `b` (from each position to
/// the next LMS position inclusively).
fn lms_substring_eq(text: &[u32], a: usize, b: usize, is_s: &[bool]) -> bool {
    let is_lms = |i: usize| i > 0 && is_s[i] && !is_s[i - 1];
    let mut k = 0usize;
    loop {
        if text[a + k] != text[b + k] {
            return false;
        }
        if k > 0 {
            let a_lms = is_lms(a + k);
            let b_lms = is_lms(b + k);
            if a_lms != b_lms {
                return false;
            }
            if a_lms {
                return true;
            }
        }
        k += 1;
    }
}

/// Kasai's LCP construction: `lcp[r]` is the longest common prefix length of
/// the suffixes at `sa[r - 1]` and `sa[r]`, with `lcp[0] = 0`.
pub(crate) fn kasai_lcp(text: &[u32], sa: &[u32]) -> Vec<u32> {
    let n = text.len();
    let mut rank = vec![0u32; n];
    for (i, &p) in sa.iter().enumerate() {
        rank[p as usize] = i as u32;
    }
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for i in 0..n {
        let r = rank[i] as usize;
        if r == 0 {
            h = 0;
            continue;
        }
        let j = sa[r - 1] as usize;
        while i + h < n && j + h < n && text[i + h] == text[j + h] {
            h += 1;
        }
        lcp[r] = h as u32;
        h = h.saturating_sub(1);
    }
    lcp
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain comparison sort: valid as an oracle because the unique smallest
    /// terminator makes all suffixes prefix-free.
    fn naive_sa(text: &[u32]) -> Vec<u32> {
        let mut sa: Vec<u32> = (0..text.len() as u32).collect();
        sa.sort_by(|&a, &b| text[a as usize..].cmp(&text[b as usize..]));
        sa
    }

    fn naive_lcp(text: &[u32], sa: &[u32]) -> Vec<u32> {
        let mut lcp = vec![0u32; sa.len()];
        for r in 1..sa.len() {
            let a = &text[sa[r - 1] as usize..];
            let b = &text[sa[r] as usize..];
            lcp[r] = a.iter().zip(b).take_while(|(x, y)| x == y).count() as u32;
        }
        lcp
    }

    fn check(text: &[u32]) {
        let alphabet = text.iter().max().map_or(1, |&m| m as usize + 1);
        let sa = suffix_array(text, alphabet);
        assert_eq!(sa, naive_sa(text), "sa mismatch for {text:?}");
        assert_eq!(kasai_lcp(text, &sa), naive_lcp(text, &sa));
    }

    fn encode(s: &str) -> Vec<u32> {
        let mut v: Vec<u32> = s.bytes().map(|b| b as u32 - b'a' as u32 + 1).collect();
        v.push(0);
        v
    }

    #[test]
    fn classic_strings() {
        check(&encode("banana"));
        check(&encode("mississippi"));
        check(&encode("abracadabra"));
        check(&encode("aaaaaa"));
        check(&encode("abab"));
        check(&[1, 0]);
        check(&[0]);
    }

    #[test]
    fn random_texts_match_naive() {
        // xorshift; no external RNG needed at this layer
        let mut state = 0x1234_5678_9abc_def0u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for case in 0..300 {
            let len = (next() % 120 + 1) as usize;
            let sigma = 1 + (case % 9) as u32;
            let mut text: Vec<u32> = (0..len).map(|_| 1 + (next() as u32) % sigma).collect();
            text.push(0);
            check(&text);
        }
    }

    #[test]
    fn distinct_sentinel_ranks_sort_by_rank() {
        // Two identical words with per-word terminator ranks 1 and 2:
        // suffix "w#1" must precede "w#2".
        let text = vec![5, 6, 1, 5, 6, 2, 0];
        let sa = suffix_array(&text, 7);
        assert_eq!(sa, naive_sa(&text));
        let pos_first = sa.iter().position(|&p| p == 0).unwrap();
        let pos_second = sa.iter().position(|&p| p == 3).unwrap();
        assert!(pos_first < pos_second);
    }
}
