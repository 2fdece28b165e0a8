//! The multi-view alignment model.
//!
//! An account pair with `l` names on the first network and `n` on the second
//! yields `l * n` name pairs ("views"). Each view is scored by the model of
//! its matching type, and the scores are laid out in a fusion vector of
//! length `3 * l * n`: view `(y, z)` (0-based) owns positions
//! `b = 3 * (y * n + z)` to `b + 2`, and writes its score at `b` for CC,
//! `b + 1` for CE or `b + 2` for EE. The other two positions stay 0. A
//! classifier over fusion vectors makes the final call.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::features::{schema_len, FeatureExtractor, FeatureVector};
use crate::models::{train, Hyperparams, Learner, LineReader, LineWriter, Model, TrainingSet};
use crate::text::{Account, MatchingType};

/// A learner and its hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelChoice {
    pub learner: Learner,
    pub params: Hyperparams,
}

impl ModelChoice {
    pub fn new(learner: Learner) -> Self {
        ModelChoice {
            learner,
            params: Hyperparams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McuaConfig {
    /// Name slots per account on the first network.
    pub l: usize,
    /// Name slots per account on the second network.
    pub n: usize,
    pub cc: ModelChoice,
    pub ce: ModelChoice,
    pub ee: ModelChoice,
    pub classifier: ModelChoice,
    /// Probabilities at or above this are predicted aligned.
    pub theta: f64,
}

impl McuaConfig {
    /// SVM (L2) for CC, random forest for CE, L1 logistic regression for EE
    /// and for the classifier.
    pub fn new(l: usize, n: usize) -> Self {
        McuaConfig {
            l,
            n,
            cc: ModelChoice::new(Learner::SvmL2),
            ce: ModelChoice::new(Learner::RandomForest),
            ee: ModelChoice::new(Learner::LogisticL1),
            classifier: ModelChoice::new(Learner::LogisticL1),
            theta: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.l == 0 || self.n == 0 {
            return Err(Error::Config(format!(
                "name slot counts must be positive, got l={} n={}",
                self.l, self.n
            )));
        }
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(Error::Config(format!("theta must lie in (0, 1), got {}", self.theta)));
        }
        Ok(())
    }

    pub fn views(&self) -> usize {
        self.l * self.n
    }

    pub fn fusion_len(&self) -> usize {
        3 * self.l * self.n
    }

    pub fn choice(&self, mt: MatchingType) -> &ModelChoice {
        match mt {
            MatchingType::CC => &self.cc,
            MatchingType::CE => &self.ce,
            MatchingType::EE => &self.ee,
        }
    }

    pub fn choice_mut(&mut self, mt: MatchingType) -> &mut ModelChoice {
        match mt {
            MatchingType::CC => &mut self.cc,
            MatchingType::CE => &mut self.ce,
            MatchingType::EE => &mut self.ee,
        }
    }
}

/// Start of the three fusion slots of view `(y, z)`, 0-based.
pub fn fusion_base(y: usize, z: usize, n: usize) -> usize {
    3 * (y * n + z)
}

/// Offset of a matching type inside its view's three slots.
pub fn slot_offset(mt: MatchingType) -> usize {
    match mt {
        MatchingType::CC => 0,
        MatchingType::CE => 1,
        MatchingType::EE => 2,
    }
}

/// Feature vectors of every view of one account pair in `(y, z)` order;
/// `None` where either name is absent.
pub type PairViews = Vec<Option<FeatureVector>>;

/// Extracts the `l * n` views of an account pair.
pub fn view_features(
    extractor: &FeatureExtractor,
    u1: &Account,
    u2: &Account,
    l: usize,
    n: usize,
) -> Result<PairViews> {
    u1.check_slots(l)?;
    u2.check_slots(n)?;
    let mut out = Vec::with_capacity(l * n);
    for a in &u1.names {
        for b in &u2.names {
            out.push(match (a, b) {
                (Some(a), Some(b)) => Some(extractor.extract(a, b)),
                _ => None,
            });
        }
    }
    Ok(out)
}

/// Training rows per matching type.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewPartitions {
    pub cc: TrainingSet,
    pub ce: TrainingSet,
    pub ee: TrainingSet,
}

impl ViewPartitions {
    pub fn get(&self, mt: MatchingType) -> &TrainingSet {
        match mt {
            MatchingType::CC => &self.cc,
            MatchingType::CE => &self.ce,
            MatchingType::EE => &self.ee,
        }
    }

    fn get_mut(&mut self, mt: MatchingType) -> &mut TrainingSet {
        match mt {
            MatchingType::CC => &mut self.cc,
            MatchingType::CE => &mut self.ce,
            MatchingType::EE => &mut self.ee,
        }
    }

    pub fn total_rows(&self) -> usize {
        self.cc.len() + self.ce.len() + self.ee.len()
    }
}

/// Routes every present view of every labeled pair to its matching type.
pub fn partition_views(pairs: &[&PairViews], labels: &[bool]) -> Result<ViewPartitions> {
    let mut parts = ViewPartitions {
        cc: TrainingSet::new(schema_len(MatchingType::CC)),
        ce: TrainingSet::new(schema_len(MatchingType::CE)),
        ee: TrainingSet::new(schema_len(MatchingType::EE)),
    };
    for (views, &label) in pairs.iter().zip(labels) {
        for fv in views.iter().flatten() {
            parts.get_mut(fv.matching_type).push(&fv.values, label)?;
        }
    }
    Ok(parts)
}

/// A labeled account pair.
#[derive(Debug, Clone, Copy)]
pub struct LabeledAccounts<'a> {
    pub first: &'a Account,
    pub second: &'a Account,
    pub label: bool,
}

pub fn partition_training_pairs(
    extractor: &FeatureExtractor,
    pairs: &[LabeledAccounts<'_>],
    l: usize,
    n: usize,
) -> Result<ViewPartitions> {
    let views = pairs
        .iter()
        .map(|p| view_features(extractor, p.first, p.second, l, n))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&PairViews> = views.iter().collect();
    let labels: Vec<bool> = pairs.iter().map(|p| p.label).collect();
    partition_views(&refs, &labels)
}

/// The three view models.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewModels {
    pub cc: Model,
    pub ce: Model,
    pub ee: Model,
}

impl ViewModels {
    pub fn get(&self, mt: MatchingType) -> &Model {
        match mt {
            MatchingType::CC => &self.cc,
            MatchingType::CE => &self.ce,
            MatchingType::EE => &self.ee,
        }
    }
}

/// Trains one model per matching type. An empty partition yields a model
/// that always outputs 0.
pub fn train_view_models(parts: &ViewPartitions, config: &McuaConfig) -> Result<ViewModels> {
    let fit = |mt: MatchingType| -> Result<Model> {
        let data = parts.get(mt);
        if data.is_empty() {
            return Ok(Model::ConstantZero { dim: schema_len(mt) });
        }
        let choice = config.choice(mt);
        train(choice.learner, &choice.params, data)
    };
    Ok(ViewModels {
        cc: fit(MatchingType::CC)?,
        ce: fit(MatchingType::CE)?,
        ee: fit(MatchingType::EE)?,
    })
}

/// Lays out the view scores of one account pair.
pub fn build_fusion_vector(views: &ViewModels, pair: &PairViews, l: usize, n: usize) -> Result<Vec<f64>> {
    if pair.len() != l * n {
        return Err(Error::SchemaViolation(format!(
            "expected {} views, got {}",
            l * n,
            pair.len()
        )));
    }
    let mut v = vec![0.0; 3 * l * n];
    for y in 0..l {
        for z in 0..n {
            if let Some(fv) = &pair[y * n + z] {
                let p = views.get(fv.matching_type).predict_proba(&fv.values)?;
                v[fusion_base(y, z, n) + slot_offset(fv.matching_type)] = p;
            }
        }
    }
    Ok(v)
}

/// Trains the classifier over the fusion vectors of the labeled pairs.
pub fn train_classifier_c(
    views: &ViewModels,
    pairs: &[&PairViews],
    labels: &[bool],
    config: &McuaConfig,
) -> Result<Model> {
    let mut data = TrainingSet::new(config.fusion_len());
    for (pair, &label) in pairs.iter().zip(labels) {
        data.push(&build_fusion_vector(views, pair, config.l, config.n)?, label)?;
    }
    train(config.classifier.learner, &config.classifier.params, &data)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentPrediction {
    pub probability: f64,
    pub label: bool,
    pub fusion_vector: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McuaModel {
    pub config: McuaConfig,
    pub views: ViewModels,
    pub classifier: Model,
}

const FORMAT_HEADER: &str = "mcua-model 1";

impl McuaModel {
    pub fn train(
        extractor: &FeatureExtractor,
        pairs: &[LabeledAccounts<'_>],
        config: &McuaConfig,
    ) -> Result<McuaModel> {
        config.validate()?;
        let views = pairs
            .iter()
            .map(|p| view_features(extractor, p.first, p.second, config.l, config.n))
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<&PairViews> = views.iter().collect();
        let labels: Vec<bool> = pairs.iter().map(|p| p.label).collect();
        McuaModel::train_views(&refs, &labels, config)
    }

    /// Trains from views extracted up front.
    pub fn train_views(pairs: &[&PairViews], labels: &[bool], config: &McuaConfig) -> Result<McuaModel> {
        config.validate()?;
        let parts = partition_views(pairs, labels)?;
        let views = train_view_models(&parts, config)?;
        let classifier = train_classifier_c(&views, pairs, labels, config)?;
        Ok(McuaModel {
            config: config.clone(),
            views,
            classifier,
        })
    }

    pub fn predict_alignment(
        &self,
        extractor: &FeatureExtractor,
        u1: &Account,
        u2: &Account,
    ) -> Result<AlignmentPrediction> {
        let pair = view_features(extractor, u1, u2, self.config.l, self.config.n)?;
        self.predict_views(&pair)
    }

    pub fn predict_views(&self, pair: &PairViews) -> Result<AlignmentPrediction> {
        let fusion_vector = build_fusion_vector(&self.views, pair, self.config.l, self.config.n)?;
        let probability = self.classifier.predict_proba(&fusion_vector)?;
        Ok(AlignmentPrediction {
            probability,
            label: probability >= self.config.theta,
            fusion_vector,
        })
    }

    pub fn to_text(&self) -> String {
        let mut w = LineWriter::default();
        w.line(FORMAT_HEADER);
        w.line(&format!("l {}", self.config.l));
        w.line(&format!("n {}", self.config.n));
        w.line(&format!("theta {}", self.config.theta));
        for mt in [MatchingType::CC, MatchingType::CE, MatchingType::EE] {
            w.line(&format!(
                "view {} {} features {}",
                mt,
                self.config.choice(mt).learner,
                schema_len(mt)
            ));
            self.views.get(mt).write(&mut w);
        }
        w.line(&format!("classifier {}", self.config.classifier.learner));
        self.classifier.write(&mut w);
        w.finish()
    }

    /// Reads a model written by [`McuaModel::to_text`]. Hyperparameters are
    /// not stored; the returned config carries defaults for them.
    pub fn from_text(text: &str) -> Result<McuaModel> {
        let mut r = LineReader::new(text);
        r.expect_line(FORMAT_HEADER)?;
        let l = r.parse_keyword("l")?;
        let n = r.parse_keyword("n")?;
        let mut config = McuaConfig::new(l, n);
        config.theta = r.parse_keyword("theta")?;
        config.validate().map_err(|e| r.error(&format!("{e}")))?;
        let mut models = Vec::new();
        for mt in [MatchingType::CC, MatchingType::CE, MatchingType::EE] {
            let rest = r.keyword("view")?;
            let parts: Vec<&str> = rest.split(' ').collect();
            let [name, learner, "features", len] = parts.as_slice() else {
                return Err(r.error("malformed view header"));
            };
            if *name != mt.as_str() {
                return Err(r.error(&format!("expected view {mt}, found {name}")));
            }
            config.choice_mut(mt).learner =
                Learner::parse(learner).ok_or_else(|| r.error("unknown learner"))?;
            let len: usize = r.parse(len)?;
            if len != schema_len(mt) {
                return Err(r.error(&format!("{mt} view needs {} features", schema_len(mt))));
            }
            let model = Model::read(&mut r)?;
            if model.dim() != len {
                return Err(r.error("model dimension differs from its schema"));
            }
            models.push(model);
        }
        let learner = r.keyword("classifier")?;
        config.classifier.learner = Learner::parse(&learner).ok_or_else(|| r.error("unknown learner"))?;
        let classifier = Model::read(&mut r)?;
        if classifier.dim() != config.fusion_len() {
            return Err(r.error("classifier dimension differs from 3 * l * n"));
        }
        let mut it = models.into_iter();
        let views = ViewModels {
            cc: it.next().expect("three views"),
            ce: it.next().expect("three views"),
            ee: it.next().expect("three views"),
        };
        Ok(McuaModel {
            config,
            views,
            classifier,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{CharClasses, Network};

    fn account(net: Network, id: &str, names: &[&str], slots: usize) -> Account {
        Account::from_raw(net, id, names, slots, &CharClasses::default()).unwrap()
    }

    #[test]
    fn partition_routing() {
        let fx = FeatureExtractor::default();
        let a = account(Network::First, "a", &["lilei"], 1);
        let b = account(Network::Second, "b", &["leili", "李雷"], 2);
        let pairs = [LabeledAccounts {
            first: &a,
            second: &b,
            label: true,
        }];
        let p = partition_training_pairs(&fx, &pairs, 1, 2).unwrap();
        assert_eq!((p.ee.len(), p.ce.len(), p.cc.len()), (1, 1, 0));
        let bad = account(Network::Second, "c", &["x"], 1);
        let pairs = [LabeledAccounts {
            first: &a,
            second: &bad,
            label: true,
        }];
        assert!(matches!(
            partition_training_pairs(&fx, &pairs, 1, 2),
            Err(Error::SchemaViolation(_))
        ));
    }

    #[test]
    fn fusion_layout() {
        let views = ViewModels {
            cc: Model::ConstantZero { dim: 58 },
            ce: Model::ConstantZero { dim: 82 },
            ee: Model::ConstantZero { dim: 18 },
        };
        let fx = FeatureExtractor::default();
        let a = account(Network::First, "a", &["lilei"], 1);
        let b = account(Network::Second, "b", &["leili"], 1);
        let pv = view_features(&fx, &a, &b, 1, 1).unwrap();
        assert_eq!(build_fusion_vector(&views, &pv, 1, 1).unwrap(), vec![0.0; 3]);
        assert_eq!(fusion_base(1, 2, 3), 15);
        assert_eq!(fusion_base(0, 0, 1), 0);
    }

    #[test]
    fn config_validation() {
        assert!(McuaConfig::new(1, 2).validate().is_ok());
        assert!(McuaConfig::new(0, 2).validate().is_err());
        let mut c = McuaConfig::new(1, 1);
        c.theta = 1.0;
        assert!(c.validate().is_err());
    }
}
