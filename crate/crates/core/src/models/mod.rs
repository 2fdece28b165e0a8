//! Binary classifiers written from scratch: regularized logistic regression
//! and squared-hinge SVMs, CART, random forests and Gaussian naive Bayes.
//!
//! Every model outputs a probability in `[0, 1]`; the SVMs map their
//! decision value through a unit sigmoid.

mod bayes;
mod forest;
mod format;
mod linear;
mod tree;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

pub use self::bayes::GaussianNb;
pub use self::forest::{ForestModel, ForestParams};
pub use self::format::{LineReader, LineWriter};
pub use self::linear::{LinearFamily, LinearModel, LinearParams, LinearProblem, Penalty};
pub use self::tree::{TreeModel, TreeParams};

/// Rows of equal length with binary labels, stored row-major.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainingSet {
    dim: usize,
    data: Vec<f64>,
    labels: Vec<bool>,
}

impl TrainingSet {
    pub fn new(dim: usize) -> Self {
        TrainingSet {
            dim,
            data: Vec::new(),
            labels: Vec::new(),
        }
    }

    pub fn from_rows(dim: usize, rows: &[Vec<f64>], labels: &[bool]) -> Result<Self> {
        let mut set = TrainingSet::new(dim);
        for (row, &label) in rows.iter().zip(labels) {
            set.push(row, label)?;
        }
        Ok(set)
    }

    pub fn push(&mut self, row: &[f64], label: bool) -> Result<()> {
        if row.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: row.len(),
            });
        }
        self.data.extend_from_slice(row);
        self.labels.push(label);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn label(&self, i: usize) -> bool {
        self.labels[i]
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn positives(&self) -> usize {
        self.labels.iter().filter(|&&l| l).count()
    }

    /// Fails unless both labels occur.
    pub fn require_both_labels(&self) -> Result<()> {
        let pos = self.positives();
        if pos == 0 {
            Err(Error::DegenerateLabels("positive"))
        } else if pos == self.len() {
            Err(Error::DegenerateLabels("negative"))
        } else {
            Ok(())
        }
    }

    /// Keeps only the listed columns, in the listed order.
    pub fn select_features(&self, columns: &[usize]) -> TrainingSet {
        let mut out = TrainingSet::new(columns.len());
        out.data.reserve(self.len() * columns.len());
        for i in 0..self.len() {
            let row = self.row(i);
            out.data.extend(columns.iter().map(|&c| row[c]));
        }
        out.labels = self.labels.clone();
        out
    }

    /// Column means and standard deviations (population).
    pub fn column_stats(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.len().max(1) as f64;
        let mut mean = alloc::vec![0.0; self.dim];
        for i in 0..self.len() {
            for (m, &v) in mean.iter_mut().zip(self.row(i)) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = alloc::vec![0.0; self.dim];
        for i in 0..self.len() {
            for ((s, &v), &m) in var.iter_mut().zip(self.row(i)).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        let std = var.into_iter().map(|s| libm::sqrt(s / n)).collect();
        (mean, std)
    }

    /// Z-scored copy; constant columns become all zero.
    pub fn standardized(&self) -> TrainingSet {
        let (mean, std) = self.column_stats();
        let mut out = self.clone();
        for i in 0..out.len() {
            let row = &mut out.data[i * self.dim..(i + 1) * self.dim];
            for ((v, &m), &s) in row.iter_mut().zip(&mean).zip(&std) {
                *v = if s > 0.0 { (*v - m) / s } else { 0.0 };
            }
        }
        out
    }
}

/// The seven candidate learners.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Learner {
    NaiveBayes,
    Cart,
    RandomForest,
    SvmL1,
    SvmL2,
    LogisticL1,
    LogisticL2,
}

impl Learner {
    pub const ALL: [Learner; 7] = [
        Learner::NaiveBayes,
        Learner::Cart,
        Learner::RandomForest,
        Learner::SvmL1,
        Learner::SvmL2,
        Learner::LogisticL1,
        Learner::LogisticL2,
    ];

    /// Short identifier used in config files and on the command line.
    pub fn id(self) -> &'static str {
        match self {
            Learner::NaiveBayes => "naive-bayes",
            Learner::Cart => "cart",
            Learner::RandomForest => "random-forest",
            Learner::SvmL1 => "svm-l1",
            Learner::SvmL2 => "svm-l2",
            Learner::LogisticL1 => "logreg-l1",
            Learner::LogisticL2 => "logreg-l2",
        }
    }

    pub fn parse(s: &str) -> Option<Learner> {
        Learner::ALL.into_iter().find(|l| l.id() == s)
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Learner::NaiveBayes => "Naive Bayes",
            Learner::Cart => "CART",
            Learner::RandomForest => "Random Forest",
            Learner::SvmL1 => "l1-Regularized l2-Loss SVM",
            Learner::SvmL2 => "l2-Regularized l2-Loss SVM",
            Learner::LogisticL1 => "l1-Regularized Logistic Regression",
            Learner::LogisticL2 => "l2-Regularized Logistic Regression",
        }
    }

    fn linear(self) -> Option<(LinearFamily, Penalty)> {
        match self {
            Learner::SvmL1 => Some((LinearFamily::SquaredHinge, Penalty::L1)),
            Learner::SvmL2 => Some((LinearFamily::SquaredHinge, Penalty::L2)),
            Learner::LogisticL1 => Some((LinearFamily::Logistic, Penalty::L1)),
            Learner::LogisticL2 => Some((LinearFamily::Logistic, Penalty::L2)),
            _ => None,
        }
    }
}

impl fmt::Display for Learner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Hyperparameters shared by all learners; each learner reads its own.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperparams {
    pub c: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub n_trees: usize,
    /// Features tried per split; `None` means `ceil(sqrt(d))` in forests
    /// and all features in a single tree.
    pub mtry: Option<usize>,
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
    pub bootstrap: bool,
    pub var_floor: f64,
    pub seed: u64,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams {
            c: 1.0,
            tol: 1e-6,
            max_iter: 2000,
            n_trees: 100,
            mtry: None,
            max_depth: None,
            min_leaf: 1,
            bootstrap: true,
            var_floor: 1e-9,
            seed: 0,
        }
    }
}

impl Hyperparams {
    pub fn linear(&self) -> LinearParams {
        LinearParams {
            c: self.c,
            tol: self.tol,
            max_iter: self.max_iter,
        }
    }

    pub fn tree(&self) -> TreeParams {
        TreeParams {
            max_depth: self.max_depth,
            min_leaf: self.min_leaf,
            mtry: self.mtry,
        }
    }

    pub fn forest(&self) -> ForestParams {
        ForestParams {
            n_trees: self.n_trees,
            tree: TreeParams {
                max_depth: self.max_depth,
                min_leaf: self.min_leaf,
                mtry: self.mtry,
            },
            bootstrap: self.bootstrap,
            seed: self.seed,
        }
    }
}

/// A trained model of any family.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Linear(LinearModel),
    Tree(TreeModel),
    Forest(ForestModel),
    NaiveBayes(GaussianNb),
    /// Stand-in for a view that never saw a training row; always outputs 0.
    ConstantZero { dim: usize },
}

/// Trains `learner` on `data`.
pub fn train(learner: Learner, params: &Hyperparams, data: &TrainingSet) -> Result<Model> {
    if let Some((family, penalty)) = learner.linear() {
        return LinearModel::train(data, family, penalty, &params.linear()).map(Model::Linear);
    }
    match learner {
        Learner::NaiveBayes => GaussianNb::train(data, params.var_floor).map(Model::NaiveBayes),
        Learner::Cart => TreeModel::train(data, &params.tree(), params.seed).map(Model::Tree),
        Learner::RandomForest => ForestModel::train(data, &params.forest()).map(Model::Forest),
        _ => unreachable!("linear learners handled above"),
    }
}

impl Model {
    pub fn dim(&self) -> usize {
        match self {
            Model::Linear(m) => m.weights.len(),
            Model::Tree(m) => m.dim(),
            Model::Forest(m) => m.dim(),
            Model::NaiveBayes(m) => m.dim(),
            Model::ConstantZero { dim } => *dim,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Model::Linear(_) => "linear",
            Model::Tree(_) => "tree",
            Model::Forest(_) => "forest",
            Model::NaiveBayes(_) => "naive-bayes",
            Model::ConstantZero { .. } => "constant-zero",
        }
    }

    pub fn predict_proba(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: x.len(),
            });
        }
        Ok(self.predict_proba_unchecked(x))
    }

    pub(crate) fn predict_proba_unchecked(&self, x: &[f64]) -> f64 {
        match self {
            Model::Linear(m) => m.predict_proba(x),
            Model::Tree(m) => m.predict_proba(x),
            Model::Forest(m) => m.predict_proba(x),
            Model::NaiveBayes(m) => m.predict_proba(x),
            Model::ConstantZero { .. } => 0.0,
        }
    }

    pub fn write(&self, w: &mut LineWriter) {
        w.line(&format!("model {}", self.kind()));
        match self {
            Model::Linear(m) => m.write(w),
            Model::Tree(m) => m.write(w),
            Model::Forest(m) => m.write(w),
            Model::NaiveBayes(m) => m.write(w),
            Model::ConstantZero { dim } => w.line(&format!("dim {dim}")),
        }
        w.line("end model");
    }

    pub fn read(r: &mut LineReader<'_>) -> Result<Model> {
        let kind = r.keyword("model")?;
        let model = match kind.as_str() {
            "linear" => Model::Linear(LinearModel::read(r)?),
            "tree" => Model::Tree(TreeModel::read(r)?),
            "forest" => Model::Forest(ForestModel::read(r)?),
            "naive-bayes" => Model::NaiveBayes(GaussianNb::read(r)?),
            "constant-zero" => Model::ConstantZero {
                dim: r.parse_keyword("dim")?,
            },
            other => return Err(r.error(&format!("unknown model kind {other:?}"))),
        };
        r.expect_line("end model")?;
        Ok(model)
    }

    pub fn to_text(&self) -> String {
        let mut w = LineWriter::default();
        self.write(&mut w);
        w.finish()
    }

    pub fn from_text(text: &str) -> Result<Model> {
        let mut r = LineReader::new(text);
        Model::read(&mut r)
    }
}

/// A feature with its importance score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureScore {
    pub index: usize,
    pub score: f64,
}

/// Sorts by descending score; equal scores keep the lower index first.
pub fn rank_scores(scores: &[f64]) -> Vec<FeatureScore> {
    let mut out: Vec<FeatureScore> = scores
        .iter()
        .enumerate()
        .map(|(index, &score)| FeatureScore { index, score })
        .collect();
    out.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.index.cmp(&b.index)));
    out
}

/// Ranks weights by `|exp(w) - 1|`, the distance of each odds ratio from 1.
pub fn rank_by_odds(weights: &[f64]) -> Vec<FeatureScore> {
    let scores: Vec<f64> = weights
        .iter()
        .map(|&w| libm::fabs(libm::exp(w) - 1.0))
        .collect();
    rank_scores(&scores)
}

/// Odds-ratio ranking of a linear model, refit on z-scored features so
/// weights are comparable across columns.
pub fn odds_ratios(model: &LinearModel, data: &TrainingSet) -> Result<Vec<FeatureScore>> {
    if data.dim() != model.weights.len() {
        return Err(Error::DimensionMismatch {
            expected: model.weights.len(),
            actual: data.dim(),
        });
    }
    let refit = LinearModel::train(
        &data.standardized(),
        model.family,
        model.penalty,
        &LinearParams {
            c: model.c,
            ..LinearParams::default()
        },
    )?;
    Ok(rank_by_odds(&refit.weights))
}

/// Mean decrease in Gini impurity, normalized to sum to 1 and ranked.
pub fn mean_decrease_impurity(model: &ForestModel) -> Vec<FeatureScore> {
    rank_scores(&model.impurity_importances())
}

impl FeatureScore {
    pub fn describe(&self, labels: &[String]) -> String {
        labels
            .get(self.index)
            .cloned()
            .unwrap_or_else(|| self.index.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rankings_break_ties_by_index() {
        let r = rank_by_odds(&[0.0, 0.0, 0.0]);
        assert_eq!(r.iter().map(|s| s.index).collect::<Vec<_>>(), vec![0, 1, 2]);
        let r = rank_by_odds(&[0.0, -2.0, 0.0]);
        assert_eq!(r[0].index, 1);
    }

    #[test]
    fn training_set_checks_dimensions() {
        let mut t = TrainingSet::new(2);
        assert!(t.push(&[1.0], true).is_err());
        t.push(&[1.0, 2.0], true).unwrap();
        assert_eq!(t.require_both_labels(), Err(Error::DegenerateLabels("negative")));
        t.push(&[0.0, 2.0], false).unwrap();
        assert!(t.require_both_labels().is_ok());
        let s = t.select_features(&[1]);
        assert_eq!(s.row(1), &[2.0]);
        let z = t.standardized();
        assert_eq!(z.row(0), &[1.0, 0.0]);
    }

    #[test]
    fn constant_zero_model() {
        let m = Model::ConstantZero { dim: 3 };
        assert_eq!(m.predict_proba(&[1.0, 1.0, 1.0]).unwrap(), 0.0);
        assert!(m.predict_proba(&[1.0]).is_err());
        assert_eq!(Model::from_text(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn learner_ids_round_trip() {
        for l in Learner::ALL {
            assert_eq!(Learner::parse(l.id()), Some(l));
        }
    }
}
