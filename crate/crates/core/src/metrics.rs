//! String similarity metrics over Unicode codepoints.
//!
//! Every similarity lies in `[0, 1]` and is symmetric. Two empty strings are
//! identical objects and score 1; an empty string against a non-empty one
//! scores whatever the formula gives, which is 0 for all of them.

use alloc::vec;
use alloc::vec::Vec;

fn chars(s: &str) -> Vec<char> {
    s.chars().collect()
}

/// Unit-cost edit distance (insert, delete, substitute).
pub fn levenshtein_distance(a: &str, b: &str) -> usize {
    levenshtein_chars(&chars(a), &chars(b))
}

pub(crate) fn levenshtein_chars(a: &[char], b: &[char]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// `1 - LD(a, b) / max(|a|, |b|)`.
pub fn sl(a: &str, b: &str) -> f64 {
    sl_chars(&chars(a), &chars(b))
}

pub(crate) fn sl_chars(a: &[char], b: &[char]) -> f64 {
    let longest = a.len().max(b.len());
    if longest == 0 {
        return 1.0;
    }
    1.0 - levenshtein_chars(a, b) as f64 / longest as f64
}

/// Length of the longest contiguous common run.
pub fn lcs_substring_len(a: &str, b: &str) -> usize {
    lcs_substring_chars(&chars(a), &chars(b))
}

pub(crate) fn lcs_substring_chars(a: &[char], b: &[char]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    let mut best = 0;
    for &ca in a {
        for (j, &cb) in b.iter().enumerate() {
            cur[j + 1] = if ca == cb { prev[j] + 1 } else { 0 };
            best = best.max(cur[j + 1]);
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    best
}

/// `2 * LCS(a, b) / (|a| + |b|)` with LCS the longest common substring.
pub fn pls(a: &str, b: &str) -> f64 {
    pls_chars(&chars(a), &chars(b))
}

pub(crate) fn pls_chars(a: &[char], b: &[char]) -> f64 {
    let total = a.len() + b.len();
    if total == 0 {
        return 1.0;
    }
    2.0 * lcs_substring_chars(a, b) as f64 / total as f64
}

/// Length of the longest common subsequence.
pub fn lcq_subseq_len(a: &str, b: &str) -> usize {
    lcq_subseq_chars(&chars(a), &chars(b))
}

pub(crate) fn lcq_subseq_chars(a: &[char], b: &[char]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for &ca in a {
        for (j, &cb) in b.iter().enumerate() {
            cur[j + 1] = if ca == cb {
                prev[j] + 1
            } else {
                prev[j + 1].max(cur[j])
            };
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Abbreviation similarity, `2 * LCQ(a, b) / (|a| + |b|)`.
pub fn sa(a: &str, b: &str) -> f64 {
    sa_chars(&chars(a), &chars(b))
}

pub(crate) fn sa_chars(a: &[char], b: &[char]) -> f64 {
    let total = a.len() + b.len();
    if total == 0 {
        return 1.0;
    }
    2.0 * lcq_subseq_chars(a, b) as f64 / total as f64
}

/// Sorted (codepoint, count) pairs.
fn frequencies(s: &[char]) -> Vec<(char, u32)> {
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    let mut out: Vec<(char, u32)> = Vec::new();
    for c in sorted {
        match out.last_mut() {
            Some((last, n)) if *last == c => *n += 1,
            _ => out.push((c, 1)),
        }
    }
    out
}

/// Cosine of the codepoint frequency vectors.
pub fn cosine_char(a: &str, b: &str) -> f64 {
    cosine_chars(&chars(a), &chars(b))
}

pub(crate) fn cosine_chars(a: &[char], b: &[char]) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 1.0,
        (true, false) | (false, true) => return 0.0,
        _ => {}
    }
    let fa = frequencies(a);
    let fb = frequencies(b);
    let (mut i, mut j, mut dot) = (0, 0, 0u64);
    while i < fa.len() && j < fb.len() {
        match fa[i].0.cmp(&fb[j].0) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                dot += u64::from(fa[i].1) * u64::from(fb[j].1);
                i += 1;
                j += 1;
            }
        }
    }
    let norm = |f: &[(char, u32)]| f.iter().map(|&(_, n)| u64::from(n) * u64::from(n)).sum::<u64>();
    let value = dot as f64 / libm::sqrt(norm(&fa) as f64 * norm(&fb) as f64);
    value.min(1.0)
}

/// Jaccard index of the distinct codepoint sets.
pub fn jaccard_char(a: &str, b: &str) -> f64 {
    jaccard_chars(&chars(a), &chars(b))
}

pub(crate) fn jaccard_chars(a: &[char], b: &[char]) -> f64 {
    let mut sa: Vec<char> = a.to_vec();
    sa.sort_unstable();
    sa.dedup();
    let mut sb: Vec<char> = b.to_vec();
    sb.sort_unstable();
    sb.dedup();
    if sa.is_empty() && sb.is_empty() {
        return 1.0;
    }
    let (mut i, mut j, mut common) = (0, 0, 0usize);
    while i < sa.len() && j < sb.len() {
        match sa[i].cmp(&sb[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    common as f64 / (sa.len() + sb.len() - common) as f64
}
