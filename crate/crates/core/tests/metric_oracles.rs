//! String metrics against brute-force oracles on random short strings.

use std::collections::{BTreeSet, HashMap};

use mcua_core::metrics::{cosine_char, jaccard_char, lcq_subseq_len, lcs_substring_len, levenshtein_distance, pls, sa, sl};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ALPHABET: [char; 6] = ['a', 'b', 'c', '李', '雷', '_'];

fn random_string(rng: &mut ChaCha8Rng) -> String {
    let len = rng.gen_range(0..=12);
    (0..len).map(|_| ALPHABET[rng.gen_range(0..ALPHABET.len())]).collect()
}

/// Top-down memoized edit distance.
fn edit_oracle(a: &[char], b: &[char]) -> usize {
    fn go(a: &[char], b: &[char], i: usize, j: usize, memo: &mut HashMap<(usize, usize), usize>) -> usize {
        if i == a.len() {
            return b.len() - j;
        }
        if j == b.len() {
            return a.len() - i;
        }
        if let Some(&v) = memo.get(&(i, j)) {
            return v;
        }
        let v = if a[i] == b[j] {
            go(a, b, i + 1, j + 1, memo)
        } else {
            1 + go(a, b, i + 1, j, memo)
                .min(go(a, b, i, j + 1, memo))
                .min(go(a, b, i + 1, j + 1, memo))
        };
        memo.insert((i, j), v);
        v
    }
    go(a, b, 0, 0, &mut HashMap::new())
}

/// Longest substring of `a` that occurs in `b`, by enumeration.
fn substring_oracle(a: &[char], b: &[char]) -> usize {
    let mut best = 0;
    for i in 0..a.len() {
        for j in i + 1..=a.len() {
            if b.windows(j - i).any(|w| w == &a[i..j]) {
                best = best.max(j - i);
            }
        }
    }
    best
}

fn is_subsequence(needle: &[char], hay: &[char]) -> bool {
    let mut it = hay.iter();
    needle.iter().all(|c| it.any(|h| h == c))
}

/// Longest subsequence of `a` that is a subsequence of `b`, over all 2^|a|
/// masks.
fn subsequence_oracle(a: &[char], b: &[char]) -> usize {
    let mut best = 0;
    for mask in 0u32..(1 << a.len()) {
        let sub: Vec<char> = (0..a.len()).filter(|i| mask >> i & 1 == 1).map(|i| a[i]).collect();
        if sub.len() > best && is_subsequence(&sub, b) {
            best = sub.len();
        }
    }
    best
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        1.0
    } else {
        num as f64 / den as f64
    }
}

#[test]
fn metrics_match_brute_force_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let (x, y) = (random_string(&mut rng), random_string(&mut rng));
        let (a, b): (Vec<char>, Vec<char>) = (x.chars().collect(), y.chars().collect());
        let ld = edit_oracle(&a, &b);
        let lcs = substring_oracle(&a, &b);
        let lcq = subsequence_oracle(&a, &b);
        assert_eq!(levenshtein_distance(&x, &y), ld, "{x:?} {y:?}");
        assert_eq!(lcs_substring_len(&x, &y), lcs, "{x:?} {y:?}");
        assert_eq!(lcq_subseq_len(&x, &y), lcq, "{x:?} {y:?}");
        let longest = a.len().max(b.len());
        let expect_sl = if longest == 0 { 1.0 } else { 1.0 - ld as f64 / longest as f64 };
        assert!((sl(&x, &y) - expect_sl).abs() <= 1e-12);
        assert!((pls(&x, &y) - ratio(2 * lcs, a.len() + b.len())).abs() <= 1e-12);
        assert!((sa(&x, &y) - ratio(2 * lcq, a.len() + b.len())).abs() <= 1e-12);
    }
}

#[test]
fn set_and_frequency_metrics_match_direct_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..500 {
        let (x, y) = (random_string(&mut rng), random_string(&mut rng));
        let sa_: BTreeSet<char> = x.chars().collect();
        let sb: BTreeSet<char> = y.chars().collect();
        let union = sa_.union(&sb).count();
        let jac = if union == 0 { 1.0 } else { sa_.intersection(&sb).count() as f64 / union as f64 };
        assert!((jaccard_char(&x, &y) - jac).abs() <= 1e-12);

        let freq = |s: &str| ALPHABET.map(|c| s.chars().filter(|&d| d == c).count() as f64);
        let (fa, fb) = (freq(&x), freq(&y));
        let dot: f64 = fa.iter().zip(&fb).map(|(p, q)| p * q).sum();
        let na: f64 = fa.iter().map(|p| p * p).sum::<f64>().sqrt();
        let nb: f64 = fb.iter().map(|p| p * p).sum::<f64>().sqrt();
        let cos = match (x.is_empty(), y.is_empty()) {
            (true, true) => 1.0,
            (true, false) | (false, true) => 0.0,
            _ => dot / (na * nb),
        };
        assert!((cosine_char(&x, &y) - cos).abs() <= 1e-12, "{x:?} {y:?}");
    }
}

#[test]
fn metrics_are_symmetric_bounded_and_reflexive() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let all: [fn(&str, &str) -> f64; 5] = [sl, pls, sa, cosine_char, jaccard_char];
    for _ in 0..300 {
        let (x, y) = (random_string(&mut rng), random_string(&mut rng));
        for f in all {
            let v = f(&x, &y);
            assert!((0.0..=1.0).contains(&v));
            assert_eq!(v, f(&y, &x));
            assert_eq!(f(&x, &x), 1.0);
        }
    }
}

#[test]
fn worked_examples() {
    assert_eq!(sl("kitten", "sitting"), 1.0 - 3.0 / 7.0);
    assert_eq!(pls("lilei", "leili"), 2.0 * 3.0 / 10.0);
    assert_eq!(sa("lilei", "ll"), 2.0 * 2.0 / 7.0);
    assert_eq!(sl("", ""), 1.0);
    assert_eq!(pls("", "abc"), 0.0);
    // codepoints, not bytes
    assert_eq!(levenshtein_distance("李雷", "李磊"), 1);
}
