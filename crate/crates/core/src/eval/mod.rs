//! Experiment harness: negative sampling, stratified folds, metrics, the
//! flat and content baselines, learner sweeps and top-k feature curves.

mod content;
mod experiment;

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use self::content::{char_ngrams, ContentModel, TfIdf};
pub use self::experiment::{
    average_rank, evaluate_fold, feature_ranking, rank_column, topk_feature_curves, topk_round, CachedPair,
    Dataset, FeatureNeeds, FeatureStore, FoldOutcome, Method, PairKey, RoundPlan, SweepTarget, TopKPoint,
};

/// Number of folds in every experiment.
pub const FOLDS: usize = 5;

/// Default imbalance ratios.
pub const DEFAULT_RNP: [usize; 6] = [1, 2, 5, 10, 20, 40];

/// Draws `r_np * positives.len()` distinct negatives. Each joins the
/// first-network account of one positive with the second-network account of
/// a different positive, and none coincides with a positive.
pub fn generate_negatives(positives: &[(usize, usize)], r_np: usize, seed: u64) -> Result<Vec<(usize, usize)>> {
    let p = positives.len();
    if p < 2 {
        return Err(Error::InsufficientPositives { needed: 2, actual: p });
    }
    let target = r_np * p;
    let taken: BTreeSet<(usize, usize)> = positives.iter().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if target * 2 <= p * (p - 1) {
        // sparse regime: rejection sampling, bounded in case repeated
        // accounts leave fewer distinct candidates than expected
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(target);
        for _ in 0..20 * target + 1000 {
            let i = rng.gen_range(0..p);
            let j = rng.gen_range(0..p - 1);
            let j = if j >= i { j + 1 } else { j };
            let cand = (positives[i].0, positives[j].1);
            if !taken.contains(&cand) && seen.insert(cand) {
                out.push(cand);
                if out.len() == target {
                    return Ok(out);
                }
            }
        }
    }
    // dense regime: enumerate and shuffle
    let mut all: Vec<(usize, usize)> = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, a) in positives.iter().enumerate() {
        for (j, b) in positives.iter().enumerate() {
            let cand = (a.0, b.1);
            if i != j && !taken.contains(&cand) && seen.insert(cand) {
                all.push(cand);
            }
        }
    }
    if all.len() < target {
        return Err(Error::InsufficientPositives {
            needed: r_np + 1,
            actual: p,
        });
    }
    all.shuffle(&mut rng);
    all.truncate(target);
    Ok(all)
}

/// Splits pair indices into [`FOLDS`] stratified folds: positives are
/// shuffled and dealt round-robin, then negatives continue the deal. Each
/// fold is returned in ascending order.
pub fn kfold_split(labels: &[bool], seed: u64) -> Result<Vec<Vec<usize>>> {
    if labels.len() < FOLDS {
        return Err(Error::TooFewPairs {
            needed: FOLDS,
            actual: labels.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos: Vec<usize> = (0..labels.len()).filter(|&i| labels[i]).collect();
    let mut neg: Vec<usize> = (0..labels.len()).filter(|&i| !labels[i]).collect();
    pos.shuffle(&mut rng);
    neg.shuffle(&mut rng);
    let mut folds = vec![Vec::new(); FOLDS];
    for (k, i) in pos.into_iter().chain(neg).enumerate() {
        folds[k % FOLDS].push(i);
    }
    folds.iter_mut().for_each(|f| f.sort_unstable());
    Ok(folds)
}

/// `(train, test)` index sets of every round. By default each round trains
/// on one fold and tests on the other four; `invert` swaps the roles.
pub fn rounds(folds: &[Vec<usize>], invert: bool) -> Vec<(Vec<usize>, Vec<usize>)> {
    (0..folds.len())
        .map(|k| {
            let one = folds[k].clone();
            let mut rest: Vec<usize> = folds
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .flat_map(|(_, f)| f.iter().copied())
                .collect();
            rest.sort_unstable();
            if invert {
                (rest, one)
            } else {
                (one, rest)
            }
        })
        .collect()
}

/// Binary confusion counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl Confusion {
    pub fn from_predictions(predictions: &[bool], labels: &[bool]) -> Confusion {
        let mut c = Confusion::default();
        for (&p, &l) in predictions.iter().zip(labels) {
            c.record(p, l);
        }
        c
    }

    pub fn record(&mut self, predicted: bool, actual: bool) {
        match (predicted, actual) {
            (true, true) => self.tp += 1,
            (true, false) => self.fp += 1,
            (false, false) => self.tn += 1,
            (false, true) => self.fn_ += 1,
        }
    }

    pub fn add(&mut self, other: &Confusion) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.tn += other.tn;
        self.fn_ += other.fn_;
    }

    pub fn metrics(&self) -> Metrics {
        let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        let precision = ratio(self.tp, self.tp + self.fp);
        let recall = ratio(self.tp, self.tp + self.fn_);
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        Metrics {
            precision,
            recall,
            f1,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Precision, recall and F1 of hard predictions. Precision is 0 when
/// nothing is predicted positive.
pub fn compute_metrics(predictions: &[bool], labels: &[bool]) -> Metrics {
    Confusion::from_predictions(predictions, labels).metrics()
}
