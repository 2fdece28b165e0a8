use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::content::{char_ngrams, ContentModel};
use super::{generate_negatives, kfold_split, rounds, Confusion, Metrics};
use crate::error::{Error, Result};
use crate::features::{schema_len, FeatureExtractor};
use crate::fusion::{view_features, McuaConfig, McuaModel, ModelChoice, PairViews};
use crate::models::{odds_ratios, rank_scores, train, FeatureScore, Learner, Model, TrainingSet};
use crate::text::{Account, MatchingType};

/// Index of a first-network account and a second-network account.
pub type PairKey = (usize, usize);

/// Accounts of both networks and the known alignments between them.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub first: Vec<Account>,
    pub second: Vec<Account>,
    pub positives: Vec<PairKey>,
    pub l: usize,
    pub n: usize,
}

impl Dataset {
    pub fn validate(&self) -> Result<()> {
        for a in &self.first {
            a.check_slots(self.l)?;
        }
        for a in &self.second {
            a.check_slots(self.n)?;
        }
        for &(i, j) in &self.positives {
            if i >= self.first.len() || j >= self.second.len() {
                return Err(Error::SchemaViolation(format!("positive ({i}, {j}) refers to a missing account")));
            }
        }
        Ok(())
    }
}

/// Everything that can be evaluated fold by fold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Mcua,
    /// One flat classifier over the concatenated per-view vectors of a
    /// single layout, computed for every view regardless of its type.
    Simple(MatchingType),
    /// Like `Simple` with all three layouts concatenated per view.
    SimpleAll,
    Content,
    /// One view model alone, scored on the views of its matching type.
    View(MatchingType, Learner),
    /// MCUA with the classifier swapped for the given learner.
    Classifier(Learner),
}

impl Method {
    pub const TABLE: [Method; 6] = [
        Method::Mcua,
        Method::Simple(MatchingType::EE),
        Method::Simple(MatchingType::CE),
        Method::Simple(MatchingType::CC),
        Method::SimpleAll,
        Method::Content,
    ];

    pub fn id(&self) -> String {
        match self {
            Method::Mcua => "mcua".into(),
            Method::Simple(mt) => format!("simple-{}", mt.as_str().to_ascii_lowercase()),
            Method::SimpleAll => "simple-all".into(),
            Method::Content => "content".into(),
            Method::View(mt, l) => format!("view-{}:{}", mt.as_str().to_ascii_lowercase(), l.id()),
            Method::Classifier(l) => format!("classifier:{}", l.id()),
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        match s {
            "mcua" => return Some(Method::Mcua),
            "simple-all" => return Some(Method::SimpleAll),
            "content" => return Some(Method::Content),
            _ => {}
        }
        if let Some(mt) = s.strip_prefix("simple-") {
            return MatchingType::parse(&mt.to_ascii_uppercase()).map(Method::Simple);
        }
        if let Some(rest) = s.strip_prefix("view-") {
            let (mt, l) = rest.split_once(':')?;
            return Some(Method::View(MatchingType::parse(&mt.to_ascii_uppercase())?, Learner::parse(l)?));
        }
        let l = s.strip_prefix("classifier:")?;
        Learner::parse(l).map(Method::Classifier)
    }

    pub fn display_name(&self) -> String {
        match self {
            Method::Mcua => "MCUA".into(),
            Method::Simple(mt) => format!("Simple-{mt}"),
            Method::SimpleAll => "Simple-All".into(),
            Method::Content => "Content".into(),
            Method::View(mt, l) => format!("{mt} {}", l.display_name()),
            Method::Classifier(l) => format!("C {}", l.display_name()),
        }
    }
}

/// Which features to compute per account pair.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FeatureNeeds {
    /// Typed views for MCUA and the per-view sweeps.
    pub typed: bool,
    /// Untyped layouts for the flat baselines, indexed EE, CE, CC.
    pub flat: [bool; 3],
    pub content: bool,
}

fn layout_index(mt: MatchingType) -> usize {
    match mt {
        MatchingType::EE => 0,
        MatchingType::CE => 1,
        MatchingType::CC => 2,
    }
}

const LAYOUTS: [MatchingType; 3] = [MatchingType::EE, MatchingType::CE, MatchingType::CC];

impl FeatureNeeds {
    pub fn for_methods(methods: &[Method]) -> FeatureNeeds {
        let mut needs = FeatureNeeds::default();
        for m in methods {
            match m {
                Method::Mcua | Method::View(..) | Method::Classifier(_) => needs.typed = true,
                Method::Simple(mt) => needs.flat[layout_index(*mt)] = true,
                Method::SimpleAll => needs.flat = [true; 3],
                Method::Content => needs.content = true,
            }
        }
        needs
    }
}

/// Precomputed features of one account pair.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CachedPair {
    pub views: PairViews,
    /// Per layout, the per-view vectors concatenated in `(y, z)` order with
    /// zeros for absent names. Empty when not requested.
    pub flat: [Vec<f64>; 3],
}

/// Feature cache keyed by account pair, plus content n-grams per account.
#[derive(Debug, Clone, Default)]
pub struct FeatureStore {
    pairs: BTreeMap<PairKey, CachedPair>,
    first_docs: Vec<Vec<String>>,
    second_docs: Vec<Vec<String>>,
}

fn account_doc(a: &Account) -> Vec<String> {
    let names: Vec<&str> = a.names.iter().flatten().map(|n| n.as_str()).collect();
    char_ngrams(&names)
}

impl FeatureStore {
    /// Features of one pair; callers may run this in parallel and assemble
    /// the results with [`FeatureStore::from_pairs`].
    pub fn compute_pair(
        extractor: &FeatureExtractor,
        dataset: &Dataset,
        key: PairKey,
        needs: FeatureNeeds,
    ) -> Result<CachedPair> {
        let u1 = &dataset.first[key.0];
        let u2 = &dataset.second[key.1];
        let mut out = CachedPair::default();
        if needs.typed {
            out.views = view_features(extractor, u1, u2, dataset.l, dataset.n)?;
        }
        for mt in LAYOUTS {
            if !needs.flat[layout_index(mt)] {
                continue;
            }
            let len = schema_len(mt);
            let mut flat = Vec::with_capacity(dataset.l * dataset.n * len);
            for a in &u1.names {
                for b in &u2.names {
                    match (a, b) {
                        (Some(a), Some(b)) => flat.extend(extractor.extract_as(mt, a.as_str(), b.as_str())),
                        _ => flat.resize(flat.len() + len, 0.0),
                    }
                }
            }
            out.flat[layout_index(mt)] = flat;
        }
        Ok(out)
    }

    pub fn from_pairs(dataset: &Dataset, pairs: BTreeMap<PairKey, CachedPair>, needs: FeatureNeeds) -> FeatureStore {
        let (first_docs, second_docs) = if needs.content {
            (
                dataset.first.iter().map(account_doc).collect(),
                dataset.second.iter().map(account_doc).collect(),
            )
        } else {
            (Vec::new(), Vec::new())
        };
        FeatureStore {
            pairs,
            first_docs,
            second_docs,
        }
    }

    /// Sequential build over `keys`.
    pub fn build(
        extractor: &FeatureExtractor,
        dataset: &Dataset,
        keys: &[PairKey],
        needs: FeatureNeeds,
    ) -> Result<FeatureStore> {
        let mut pairs = BTreeMap::new();
        for &k in keys {
            if let alloc::collections::btree_map::Entry::Vacant(e) = pairs.entry(k) {
                e.insert(FeatureStore::compute_pair(extractor, dataset, k, needs)?);
            }
        }
        Ok(FeatureStore::from_pairs(dataset, pairs, needs))
    }

    pub fn get(&self, key: PairKey) -> Result<&CachedPair> {
        self.pairs
            .get(&key)
            .ok_or_else(|| Error::SchemaViolation(format!("no features cached for pair {key:?}")))
    }

    fn flat(&self, key: PairKey, layouts: &[MatchingType]) -> Result<Vec<f64>> {
        let cached = self.get(key)?;
        let mut out = Vec::new();
        for &mt in layouts {
            let v = &cached.flat[layout_index(mt)];
            if v.is_empty() {
                return Err(Error::SchemaViolation(format!("{mt} layout was not computed")));
            }
            out.push(v);
        }
        if out.len() == 1 {
            return Ok(out[0].clone());
        }
        // interleave per view: [EE, CE, CC] of view 0, then view 1, ...
        let views = out[0].len() / schema_len(layouts[0]);
        let mut flat = Vec::new();
        for v in 0..views {
            for (&mt, vec) in layouts.iter().zip(&out) {
                let len = schema_len(mt);
                flat.extend_from_slice(&vec[v * len..(v + 1) * len]);
            }
        }
        Ok(flat)
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// The labeled pairs of one imbalance setting and their fold rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundPlan {
    pub r_np: usize,
    pub pairs: Vec<PairKey>,
    pub labels: Vec<bool>,
    pub rounds: Vec<(Vec<usize>, Vec<usize>)>,
}

impl RoundPlan {
    /// Positives first, then `r_np` times as many sampled negatives.
    pub fn new(dataset: &Dataset, r_np: usize, seed: u64, invert_folds: bool) -> Result<RoundPlan> {
        let negatives = generate_negatives(&dataset.positives, r_np, splitmix(seed ^ (r_np as u64) << 1))?;
        let mut pairs = dataset.positives.clone();
        pairs.extend(negatives);
        let mut labels = alloc::vec![true; dataset.positives.len()];
        labels.resize(pairs.len(), false);
        let folds = kfold_split(&labels, splitmix(seed.wrapping_add(r_np as u64)))?;
        Ok(RoundPlan {
            r_np,
            pairs,
            labels,
            rounds: rounds(&folds, invert_folds),
        })
    }
}

/// Result of one method on one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FoldOutcome {
    pub confusion: Confusion,
}

fn typed_rows(
    store: &FeatureStore,
    plan: &RoundPlan,
    idx: &[usize],
    mt: MatchingType,
) -> Result<TrainingSet> {
    let mut data = TrainingSet::new(schema_len(mt));
    for &i in idx {
        for fv in store.get(plan.pairs[i])?.views.iter().flatten() {
            if fv.matching_type == mt {
                data.push(&fv.values, plan.labels[i])?;
            }
        }
    }
    Ok(data)
}

fn score_rows(model: &Model, data: &TrainingSet, theta: f64) -> Result<Confusion> {
    let mut c = Confusion::default();
    for i in 0..data.len() {
        c.record(model.predict_proba(data.row(i))? >= theta, data.label(i));
    }
    Ok(c)
}

/// Trains `method` on the training side of round `round` and scores the
/// test side. `baseline` is the learner of the flat baselines.
pub fn evaluate_fold(
    method: Method,
    store: &FeatureStore,
    plan: &RoundPlan,
    round: usize,
    config: &McuaConfig,
    baseline: &ModelChoice,
) -> Result<FoldOutcome> {
    let (train_idx, test_idx) = &plan.rounds[round];
    let labels_of = |idx: &[usize]| -> Vec<bool> { idx.iter().map(|&i| plan.labels[i]).collect() };
    let confusion = match method {
        Method::Mcua | Method::Classifier(_) => {
            let mut config = config.clone();
            if let Method::Classifier(l) = method {
                config.classifier.learner = l;
            }
            let views: Vec<&PairViews> = train_idx
                .iter()
                .map(|&i| store.get(plan.pairs[i]).map(|c| &c.views))
                .collect::<Result<_>>()?;
            let model = McuaModel::train_views(&views, &labels_of(train_idx), &config)?;
            let mut c = Confusion::default();
            for &i in test_idx {
                let p = model.predict_views(&store.get(plan.pairs[i])?.views)?;
                c.record(p.label, plan.labels[i]);
            }
            c
        }
        Method::Simple(_) | Method::SimpleAll => {
            let layouts: &[MatchingType] = match method {
                Method::Simple(ref mt) => core::slice::from_ref(mt),
                _ => &LAYOUTS,
            };
            let build = |idx: &[usize]| -> Result<TrainingSet> {
                let dim = layouts.iter().map(|&m| schema_len(m)).sum::<usize>() * plan_views(store, plan)?;
                let mut data = TrainingSet::new(dim);
                for &i in idx {
                    data.push(&store.flat(plan.pairs[i], layouts)?, plan.labels[i])?;
                }
                Ok(data)
            };
            let train_set = build(train_idx)?;
            let model = train(baseline.learner, &baseline.params, &train_set)?;
            score_rows(&model, &build(test_idx)?, config.theta)?
        }
        Method::Content => {
            let doc = |k: PairKey| (store.first_docs[k.0].as_slice(), store.second_docs[k.1].as_slice());
            if store.first_docs.is_empty() && !plan.pairs.is_empty() {
                return Err(Error::SchemaViolation("content documents were not computed".into()));
            }
            let mut idf_docs: BTreeMap<(u8, usize), &[String]> = BTreeMap::new();
            for &i in train_idx {
                let k = plan.pairs[i];
                idf_docs.insert((1, k.0), &store.first_docs[k.0]);
                idf_docs.insert((2, k.1), &store.second_docs[k.1]);
            }
            let idf_docs: Vec<&[String]> = idf_docs.into_values().collect();
            let pairs: Vec<(&[String], &[String])> = train_idx.iter().map(|&i| doc(plan.pairs[i])).collect();
            let model = ContentModel::fit(&idf_docs, &pairs, &labels_of(train_idx));
            let mut c = Confusion::default();
            for &i in test_idx {
                let (a, b) = doc(plan.pairs[i]);
                c.record(model.predict(a, b), plan.labels[i]);
            }
            c
        }
        Method::View(mt, learner) => {
            let train_set = typed_rows(store, plan, train_idx, mt)?;
            let choice = ModelChoice {
                learner,
                params: config.choice(mt).params.clone(),
            };
            let model = train(choice.learner, &choice.params, &train_set)?;
            score_rows(&model, &typed_rows(store, plan, test_idx, mt)?, config.theta)?
        }
    };
    Ok(FoldOutcome { confusion })
}

fn plan_views(store: &FeatureStore, plan: &RoundPlan) -> Result<usize> {
    let first = plan.pairs.first().ok_or(Error::TooFewPairs { needed: 1, actual: 0 })?;
    let cached = store.get(*first)?;
    for mt in LAYOUTS {
        let v = &cached.flat[layout_index(mt)];
        if !v.is_empty() {
            return Ok(v.len() / schema_len(mt));
        }
    }
    Err(Error::SchemaViolation("no flat layout was computed".into()))
}

/// 1-based ranks by descending value; ties go to the earlier entry.
pub fn rank_column(values: &[f64]) -> Vec<usize> {
    let ranked = rank_scores(values);
    let mut ranks = alloc::vec![0; values.len()];
    for (r, s) in ranked.iter().enumerate() {
        ranks[s.index] = r + 1;
    }
    ranks
}

pub fn average_rank(ranks: &[usize]) -> f64 {
    if ranks.is_empty() {
        return 0.0;
    }
    ranks.iter().sum::<usize>() as f64 / ranks.len() as f64
}

/// Importance ranking of a trained view model: odds ratios for linear
/// models, mean decrease in impurity for forests and single trees.
pub fn feature_ranking(model: &Model, data: &TrainingSet) -> Result<Vec<FeatureScore>> {
    match model {
        Model::Linear(m) => odds_ratios(m, data),
        Model::Forest(f) => Ok(crate::models::mean_decrease_impurity(f)),
        Model::Tree(t) => {
            let mut d = t.impurity_decreases();
            let sum: f64 = d.iter().sum();
            if sum > 0.0 {
                d.iter_mut().for_each(|v| *v /= sum);
            }
            Ok(rank_scores(&d))
        }
        Model::NaiveBayes(_) | Model::ConstantZero { .. } => Err(Error::Config(format!(
            "{} models have no feature importance",
            model.kind()
        ))),
    }
}

/// Pooled metrics of a view model restricted to its top-k features.
#[derive(Debug, Clone, PartialEq)]
pub struct TopKPoint {
    pub k: usize,
    pub confusion: Confusion,
    pub metrics: Metrics,
}

/// One round of the top-k experiment: rank features on the training side,
/// retrain on each top-k subset (kept in original index order) and score
/// the test side. Returns one confusion per entry of `k_values`.
pub fn topk_round(
    store: &FeatureStore,
    plan: &RoundPlan,
    round: usize,
    mt: MatchingType,
    k_values: &[usize],
    config: &McuaConfig,
) -> Result<Vec<Confusion>> {
    let (train_idx, test_idx) = &plan.rounds[round];
    let train_set = typed_rows(store, plan, train_idx, mt)?;
    let test_set = typed_rows(store, plan, test_idx, mt)?;
    let choice = config.choice(mt);
    let full = train(choice.learner, &choice.params, &train_set)?;
    let ranking = feature_ranking(&full, &train_set)?;
    let d = schema_len(mt);
    let mut out = Vec::with_capacity(k_values.len());
    for &k in k_values {
        if k == 0 || k > d {
            return Err(Error::Config(format!("k must lie in 1..={d}, got {k}")));
        }
        let mut cols: Vec<usize> = ranking[..k].iter().map(|s| s.index).collect();
        cols.sort_unstable();
        let model = train(choice.learner, &choice.params, &train_set.select_features(&cols))?;
        out.push(score_rows(&model, &test_set.select_features(&cols), config.theta)?);
    }
    Ok(out)
}

/// Top-k curves pooled over every round of `plan`.
pub fn topk_feature_curves(
    store: &FeatureStore,
    plan: &RoundPlan,
    mt: MatchingType,
    k_values: &[usize],
    config: &McuaConfig,
) -> Result<Vec<TopKPoint>> {
    let mut pooled = alloc::vec![Confusion::default(); k_values.len()];
    for round in 0..plan.rounds.len() {
        for (p, c) in pooled.iter_mut().zip(topk_round(store, plan, round, mt, k_values, config)?) {
            p.add(&c);
        }
    }
    Ok(k_values
        .iter()
        .zip(pooled)
        .map(|(&k, confusion)| TopKPoint {
            k,
            confusion,
            metrics: confusion.metrics(),
        })
        .collect())
}

/// What a learner sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepTarget {
    View(MatchingType),
    Classifier,
}

impl SweepTarget {
    pub fn method(self, learner: Learner) -> Method {
        match self {
            SweepTarget::View(mt) => Method::View(mt, learner),
            SweepTarget::Classifier => Method::Classifier(learner),
        }
    }
}
