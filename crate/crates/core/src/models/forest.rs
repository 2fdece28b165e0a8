//! Random forests of CART trees.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::format::{LineReader, LineWriter};
use super::tree::{TreeModel, TreeParams};
use super::TrainingSet;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct ForestParams {
    pub n_trees: usize,
    /// `mtry: None` means `ceil(sqrt(d))` here.
    pub tree: TreeParams,
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 100,
            tree: TreeParams {
                max_depth: None,
                min_leaf: 1,
                mtry: None,
            },
            bootstrap: true,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForestModel {
    dim: usize,
    mtry: usize,
    trees: Vec<TreeModel>,
    tree_seeds: Vec<u64>,
    /// Out-of-bag accuracy; `None` without bootstrap or when no row was
    /// ever left out.
    pub oob_accuracy: Option<f64>,
}

/// `ceil(sqrt(d))`, at least 1.
pub fn default_mtry(d: usize) -> usize {
    let mut k = 1;
    while k * k < d {
        k += 1;
    }
    k
}

impl ForestModel {
    pub fn train(data: &TrainingSet, params: &ForestParams) -> Result<ForestModel> {
        data.require_both_labels()?;
        let d = data.dim();
        let mtry = params.tree.mtry.unwrap_or_else(|| default_mtry(d)).clamp(1, d.max(1));
        let tree_params = TreeParams {
            mtry: Some(mtry),
            ..params.tree.clone()
        };
        let n = data.len();
        let mut master = ChaCha8Rng::seed_from_u64(params.seed);
        let mut trees = Vec::with_capacity(params.n_trees);
        let mut tree_seeds = Vec::with_capacity(params.n_trees);
        let mut oob_votes = vec![(0u32, 0u32); n];
        for _ in 0..params.n_trees.max(1) {
            let seed = master.next_u64();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut rows: Vec<usize> = if params.bootstrap {
                (0..n).map(|_| rng.gen_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            let mut in_bag = vec![false; n];
            rows.iter().for_each(|&r| in_bag[r] = true);
            let tree = TreeModel::train_rows(data, &mut rows, &tree_params, rng)?;
            if params.bootstrap {
                for (i, _) in in_bag.iter().enumerate().filter(|(_, &b)| !b) {
                    let vote = tree.predict_proba(data.row(i)) >= 0.5;
                    let v = &mut oob_votes[i];
                    v.1 += 1;
                    if vote == data.label(i) {
                        v.0 += 1;
                    }
                }
            }
            trees.push(tree);
            tree_seeds.push(seed);
        }
        let voted: Vec<&(u32, u32)> = oob_votes.iter().filter(|v| v.1 > 0).collect();
        let oob_accuracy = (!voted.is_empty()).then(|| {
            let correct = voted.iter().filter(|v| 2 * v.0 >= v.1).count();
            correct as f64 / voted.len() as f64
        });
        Ok(ForestModel {
            dim: d,
            mtry,
            trees,
            tree_seeds,
            oob_accuracy,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trees(&self) -> &[TreeModel] {
        &self.trees
    }

    pub fn tree_seeds(&self) -> &[u64] {
        &self.tree_seeds
    }

    pub fn mtry(&self) -> usize {
        self.mtry
    }

    /// Fraction of trees voting positive; a tree votes positive when its
    /// leaf holds at least half positives.
    pub fn predict_proba(&self, x: &[f64]) -> f64 {
        let votes = self
            .trees
            .iter()
            .filter(|t| t.predict_proba(x) >= 0.5)
            .count();
        votes as f64 / self.trees.len() as f64
    }

    /// Mean decrease in impurity per feature, normalized to sum to 1. A
    /// forest without a single split spreads the mass evenly.
    pub fn impurity_importances(&self) -> Vec<f64> {
        let mut total = vec![0.0; self.dim];
        for t in &self.trees {
            for (a, b) in total.iter_mut().zip(t.impurity_decreases()) {
                *a += b;
            }
        }
        let sum: f64 = total.iter().sum();
        if sum > 0.0 {
            total.iter_mut().for_each(|v| *v /= sum);
        } else if self.dim > 0 {
            total.iter_mut().for_each(|v| *v = 1.0 / self.dim as f64);
        }
        total
    }

    pub(super) fn write(&self, w: &mut LineWriter) {
        w.line(&format!("dim {}", self.dim));
        w.line(&format!("mtry {}", self.mtry));
        match self.oob_accuracy {
            Some(a) => w.line(&format!("oob {a}")),
            None => w.line("oob none"),
        }
        w.line(&format!("trees {}", self.trees.len()));
        for (t, seed) in self.trees.iter().zip(&self.tree_seeds) {
            w.line(&format!("tree {seed}"));
            t.write(w);
        }
    }

    pub(super) fn read(r: &mut LineReader<'_>) -> Result<ForestModel> {
        let dim = r.parse_keyword("dim")?;
        let mtry = r.parse_keyword("mtry")?;
        let oob = r.keyword("oob")?;
        let oob_accuracy = if oob == "none" { None } else { Some(r.parse(&oob)?) };
        let count: usize = r.parse_keyword("trees")?;
        let mut trees = Vec::with_capacity(count);
        let mut tree_seeds = Vec::with_capacity(count);
        for _ in 0..count {
            tree_seeds.push(r.parse_keyword("tree")?);
            let t = TreeModel::read(r)?;
            if t.dim() != dim {
                return Err(r.error("tree dimension differs from forest"));
            }
            trees.push(t);
        }
        if trees.is_empty() {
            return Err(r.error("forest without trees"));
        }
        Ok(ForestModel {
            dim,
            mtry,
            trees,
            tree_seeds,
            oob_accuracy,
        })
    }
}
