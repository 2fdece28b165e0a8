//! CART classification trees with Gini impurity.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::format::{LineReader, LineWriter};
use super::TrainingSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TreeParams {
    /// `None` grows until leaves are pure or too small to split.
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
    /// Features tried at each split; `None` tries all of them.
    pub mtry: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Node {
    Leaf {
        positives: u32,
        total: u32,
    },
    /// Rows with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
        /// `n_t * G_t - n_l * G_l - n_r * G_r` at this node.
        decrease: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeModel {
    dim: usize,
    nodes: Vec<Node>,
    /// Rows (with repeats) the tree was grown on.
    n_train: usize,
}

fn gini_sum(pos: f64, total: f64) -> f64 {
    // n * G for a node with `pos` positives out of `total`
    if total == 0.0 {
        return 0.0;
    }
    let neg = total - pos;
    total - (pos * pos + neg * neg) / total
}

struct Builder<'a> {
    data: &'a TrainingSet,
    params: &'a TreeParams,
    rng: ChaCha8Rng,
    nodes: Vec<Node>,
    features: Vec<usize>,
    scratch: Vec<(f64, bool)>,
}

impl Builder<'_> {
    fn candidate_features(&mut self) -> Vec<usize> {
        let d = self.data.dim();
        let k = self.params.mtry.unwrap_or(d).clamp(1, d.max(1));
        if k >= d {
            return (0..d).collect();
        }
        for i in 0..k {
            let j = self.rng.gen_range(i..d);
            self.features.swap(i, j);
        }
        let mut chosen = self.features[..k].to_vec();
        chosen.sort_unstable();
        chosen
    }

    /// Best split over the candidate features: `(feature, threshold, score)`
    /// where `score = n_l * G_l + n_r * G_r`.
    fn best_split(&mut self, rows: &[usize], features: &[usize]) -> Option<(usize, f64, f64)> {
        let min_leaf = self.params.min_leaf.max(1);
        let n = rows.len();
        let total_pos = rows.iter().filter(|&&r| self.data.label(r)).count() as f64;
        let mut best: Option<(usize, f64, f64)> = None;
        for &f in features {
            self.scratch.clear();
            self.scratch
                .extend(rows.iter().map(|&r| (self.data.row(r)[f], self.data.label(r))));
            self.scratch.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut left_pos = 0.0;
            for k in 0..n - 1 {
                if self.scratch[k].1 {
                    left_pos += 1.0;
                }
                let (lo, hi) = (self.scratch[k].0, self.scratch[k + 1].0);
                let n_left = k + 1;
                if lo == hi || n_left < min_leaf || n - n_left < min_leaf {
                    continue;
                }
                let score = gini_sum(left_pos, n_left as f64)
                    + gini_sum(total_pos - left_pos, (n - n_left) as f64);
                if best.is_none_or(|(_, _, s)| score < s) {
                    let mut threshold = lo + (hi - lo) / 2.0;
                    if threshold >= hi {
                        threshold = lo;
                    }
                    best = Some((f, threshold, score));
                }
            }
        }
        best
    }

    fn grow(&mut self, rows: &mut [usize], depth: usize) -> usize {
        let positives = rows.iter().filter(|&&r| self.data.label(r)).count();
        let total = rows.len();
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf {
            positives: positives as u32,
            total: total as u32,
        });
        let pure = positives == 0 || positives == total;
        let depth_ok = self.params.max_depth.is_none_or(|m| depth < m);
        if pure || !depth_ok || total < 2 * self.params.min_leaf.max(1) {
            return id;
        }
        let features = self.candidate_features();
        let Some((feature, threshold, score)) = self.best_split(rows, &features) else {
            return id;
        };
        let decrease = gini_sum(positives as f64, total as f64) - score;
        let data = self.data;
        let mut split = 0;
        for i in 0..rows.len() {
            if data.row(rows[i])[feature] <= threshold {
                rows.swap(i, split);
                split += 1;
            }
        }
        let (left_rows, right_rows) = rows.split_at_mut(split);
        let left = self.grow(left_rows, depth + 1);
        let right = self.grow(right_rows, depth + 1);
        self.nodes[id] = Node::Split {
            feature,
            threshold,
            left,
            right,
            decrease: decrease.max(0.0),
        };
        id
    }
}

impl TreeModel {
    /// Grows a tree on every row of `data`. The seed only matters when
    /// `mtry` restricts the features tried per split.
    pub fn train(data: &TrainingSet, params: &TreeParams, seed: u64) -> Result<TreeModel> {
        let mut rows: Vec<usize> = (0..data.len()).collect();
        Self::train_rows(data, &mut rows, params, ChaCha8Rng::seed_from_u64(seed))
    }

    pub(crate) fn train_rows(
        data: &TrainingSet,
        rows: &mut [usize],
        params: &TreeParams,
        rng: ChaCha8Rng,
    ) -> Result<TreeModel> {
        if rows.is_empty() {
            return Err(Error::DegenerateLabels("positive"));
        }
        let mut b = Builder {
            data,
            params,
            rng,
            nodes: Vec::new(),
            features: (0..data.dim()).collect(),
            scratch: Vec::with_capacity(rows.len()),
        };
        b.grow(rows, 0);
        Ok(TreeModel {
            dim: data.dim(),
            nodes: b.nodes,
            n_train: rows.len(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], i: usize) -> usize {
            match nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }

    /// Training-row counts of every leaf.
    pub fn leaf_sizes(&self) -> Vec<u32> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Leaf { total, .. } => Some(*total),
                _ => None,
            })
            .collect()
    }

    /// Fraction of positives in the leaf `x` falls into.
    pub fn predict_proba(&self, x: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { positives, total } => return positives as f64 / total as f64,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => i = if x[feature] <= threshold { left } else { right },
            }
        }
    }

    /// Per-feature Gini decrease summed over splits, each divided by the
    /// number of training rows.
    pub fn impurity_decreases(&self) -> Vec<f64> {
        let mut out = alloc::vec![0.0; self.dim];
        for n in &self.nodes {
            if let Node::Split { feature, decrease, .. } = n {
                out[*feature] += decrease / self.n_train as f64;
            }
        }
        out
    }

    pub(super) fn write(&self, w: &mut LineWriter) {
        w.line(&format!("dim {}", self.dim));
        w.line(&format!("rows {}", self.n_train));
        w.line(&format!("nodes {}", self.nodes.len()));
        for n in &self.nodes {
            match n {
                Node::Leaf { positives, total } => w.line(&format!("leaf {positives} {total}")),
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    decrease,
                } => w.line(&format!("split {feature} {threshold} {left} {right} {decrease}")),
            }
        }
    }

    pub(super) fn read(r: &mut LineReader<'_>) -> Result<TreeModel> {
        let dim: usize = r.parse_keyword("dim")?;
        let n_train = r.parse_keyword("rows")?;
        let count: usize = r.parse_keyword("nodes")?;
        let mut nodes = Vec::with_capacity(count);
        for _ in 0..count {
            let line = r.next_line()?;
            let parts: Vec<&str> = line.split(' ').collect();
            let node = match parts.as_slice() {
                ["leaf", p, t] => Node::Leaf {
                    positives: r.parse(p)?,
                    total: r.parse(t)?,
                },
                ["split", f, th, l, rt, dec] => Node::Split {
                    feature: r.parse(f)?,
                    threshold: r.parse(th)?,
                    left: r.parse(l)?,
                    right: r.parse(rt)?,
                    decrease: r.parse(dec)?,
                },
                _ => return Err(r.error(&format!("bad node {line:?}"))),
            };
            nodes.push(node);
        }
        for n in &nodes {
            match *n {
                Node::Split { feature, left, right, .. }
                    if feature >= dim || left >= count || right >= count =>
                {
                    return Err(r.error("split refers outside the tree"));
                }
                Node::Leaf { total: 0, .. } => return Err(r.error("empty leaf")),
                _ => {}
            }
        }
        if nodes.is_empty() {
            return Err(r.error("tree without nodes"));
        }
        Ok(TreeModel { dim, nodes, n_train })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Model;

    fn xor() -> TrainingSet {
        let mut t = TrainingSet::new(2);
        for _ in 0..3 {
            for (a, b) in [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)] {
                t.push(&[a, b], (a == 1.0) != (b == 1.0)).unwrap();
            }
        }
        t
    }

    #[test]
    fn pure_data_gives_a_single_leaf() {
        let mut t = TrainingSet::new(1);
        for i in 0..5 {
            t.push(&[i as f64], true).unwrap();
        }
        let m = TreeModel::train(&t, &TreeParams::default(), 0).unwrap();
        assert_eq!(m.node_count(), 1);
        assert_eq!(m.predict_proba(&[3.0]), 1.0);
    }

    #[test]
    fn xor_needs_depth_two() {
        let t = xor();
        let m = TreeModel::train(&t, &TreeParams::default(), 0).unwrap();
        assert_eq!(m.depth(), 2);
        for i in 0..t.len() {
            assert_eq!(m.predict_proba(t.row(i)) >= 0.5, t.label(i));
        }
    }

    #[test]
    fn min_leaf_is_respected() {
        let mut t = TrainingSet::new(1);
        for i in 0..20 {
            t.push(&[i as f64], i % 3 == 0).unwrap();
        }
        let params = TreeParams {
            min_leaf: 4,
            ..TreeParams::default()
        };
        let m = TreeModel::train(&t, &params, 0).unwrap();
        assert!(m.leaf_sizes().iter().all(|&s| s >= 4));
        let depth_one = TreeParams {
            max_depth: Some(1),
            ..TreeParams::default()
        };
        assert!(TreeModel::train(&t, &depth_one, 0).unwrap().depth() <= 1);
    }

    #[test]
    fn round_trip() {
        let m = Model::Tree(TreeModel::train(&xor(), &TreeParams::default(), 0).unwrap());
        assert_eq!(Model::from_text(&m.to_text()).unwrap(), m);
    }
}
