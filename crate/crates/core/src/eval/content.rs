//! Content baseline: character 1-2-gram TF-IDF vectors per account, cosine
//! similarity, and a threshold tuned for F1 on the training pairs.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::Confusion;
use crate::text::lowercase;

/// Unigrams and bigrams of each name, lowercased. Bigrams never span two
/// names.
pub fn char_ngrams(names: &[&str]) -> Vec<String> {
    let mut out = Vec::new();
    for name in names {
        let chars: Vec<char> = lowercase(name).chars().collect();
        out.extend(chars.iter().map(|c| String::from(*c)));
        out.extend(chars.windows(2).map(|w| w.iter().collect::<String>()));
    }
    out
}

/// Smoothed inverse document frequencies, `ln((1 + N) / (1 + df)) + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TfIdf {
    documents: usize,
    df: BTreeMap<String, usize>,
}

impl TfIdf {
    pub fn fit(docs: &[&[String]]) -> TfIdf {
        let mut df = BTreeMap::new();
        for doc in docs {
            let mut terms: Vec<&String> = doc.iter().collect();
            terms.sort_unstable();
            terms.dedup();
            for t in terms {
                *df.entry(t.clone()).or_insert(0) += 1;
            }
        }
        TfIdf {
            documents: docs.len(),
            df,
        }
    }

    pub fn documents(&self) -> usize {
        self.documents
    }

    /// Terms never seen in training get the `df = 0` weight.
    pub fn idf(&self, term: &str) -> f64 {
        let df = self.df.get(term).copied().unwrap_or(0);
        libm::log((1 + self.documents) as f64 / (1 + df) as f64) + 1.0
    }

    /// Raw term counts times IDF, sorted by term.
    pub fn vector(&self, doc: &[String]) -> Vec<(String, f64)> {
        let mut tf: BTreeMap<&str, usize> = BTreeMap::new();
        for t in doc {
            *tf.entry(t.as_str()).or_insert(0) += 1;
        }
        tf.into_iter()
            .map(|(t, c)| (String::from(t), c as f64 * self.idf(t)))
            .collect()
    }

    pub fn cosine(&self, a: &[String], b: &[String]) -> f64 {
        let va = self.vector(a);
        let vb = self.vector(b);
        if va.is_empty() || vb.is_empty() {
            return 0.0;
        }
        let (mut i, mut j, mut dot) = (0, 0, 0.0);
        while i < va.len() && j < vb.len() {
            match va[i].0.cmp(&vb[j].0) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => {
                    dot += va[i].1 * vb[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        let norm = |v: &[(String, f64)]| libm::sqrt(v.iter().map(|(_, x)| x * x).sum::<f64>());
        (dot / (norm(&va) * norm(&vb))).min(1.0)
    }
}

/// TF-IDF weights plus a decision threshold on the cosine score.
#[derive(Debug, Clone, PartialEq)]
pub struct ContentModel {
    pub tfidf: TfIdf,
    pub threshold: f64,
}

impl ContentModel {
    /// `idf_docs` are the training accounts; `pairs` and `labels` the
    /// training pairs used to pick the threshold.
    pub fn fit(idf_docs: &[&[String]], pairs: &[(&[String], &[String])], labels: &[bool]) -> ContentModel {
        let tfidf = TfIdf::fit(idf_docs);
        let mut scored: Vec<(f64, bool)> = pairs
            .iter()
            .zip(labels)
            .map(|((a, b), &l)| (tfidf.cosine(a, b), l))
            .collect();
        scored.sort_by(|a, b| b.0.total_cmp(&a.0));
        let positives = scored.iter().filter(|s| s.1).count();
        // sweep thresholds from high to low; predicting positive at >= t
        let mut best = (f64::NEG_INFINITY, f64::INFINITY);
        let mut c = Confusion {
            fn_: positives,
            tn: scored.len() - positives,
            ..Confusion::default()
        };
        let mut i = 0;
        while i < scored.len() {
            let t = scored[i].0;
            while i < scored.len() && scored[i].0 == t {
                if scored[i].1 {
                    c.tp += 1;
                    c.fn_ -= 1;
                } else {
                    c.fp += 1;
                    c.tn -= 1;
                }
                i += 1;
            }
            let f1 = c.metrics().f1;
            if f1 > best.0 {
                best = (f1, t);
            }
        }
        ContentModel {
            tfidf,
            threshold: best.1,
        }
    }

    pub fn score(&self, a: &[String], b: &[String]) -> f64 {
        self.tfidf.cosine(a, b)
    }

    pub fn predict(&self, a: &[String], b: &[String]) -> bool {
        self.score(a, b) >= self.threshold
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn ngrams() {
        let g = char_ngrams(&["Ab", "李雷"]);
        assert_eq!(g, ["a", "b", "ab", "李", "雷", "李雷"]);
    }

    #[test]
    fn cosine_edges() {
        let docs = [char_ngrams(&["lilei"]), char_ngrams(&["xyz"])];
        let refs: Vec<&[String]> = docs.iter().map(|d| d.as_slice()).collect();
        let t = TfIdf::fit(&refs);
        assert!((t.cosine(&docs[0], &docs[0]) - 1.0).abs() < 1e-12);
        assert_eq!(t.cosine(&docs[0], &docs[1]), 0.0);
    }

    #[test]
    fn idf_uses_only_fitted_documents() {
        let train = [char_ngrams(&["ab"]), char_ngrams(&["ac"])];
        let refs: Vec<&[String]> = train.iter().map(|d| d.as_slice()).collect();
        let t = TfIdf::fit(&refs);
        assert_eq!(t.documents(), 2);
        assert!((t.idf("a") - (libm::log(3.0 / 3.0) + 1.0)).abs() < 1e-12);
        assert!((t.idf("b") - (libm::log(3.0 / 2.0) + 1.0)).abs() < 1e-12);
        assert!((t.idf("zz") - (libm::log(3.0) + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn threshold_separates_training_pairs() {
        let a = char_ngrams(&["lilei"]);
        let b = char_ngrams(&["lilei88"]);
        let c = char_ngrams(&["qqq"]);
        let docs: Vec<&[String]> = vec![&a, &b, &c];
        let pairs = [(a.as_slice(), b.as_slice()), (a.as_slice(), c.as_slice())];
        let m = ContentModel::fit(&docs, &pairs, &[true, false]);
        assert!(m.predict(&a, &b));
        assert!(!m.predict(&a, &c));
    }
}
