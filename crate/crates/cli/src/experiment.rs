//! Parallel experiment driver and report formatting.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use anyhow::Result;
use mcua_core::eval::{
    average_rank, evaluate_fold, rank_column, topk_round, Confusion, Dataset, FeatureNeeds, FeatureStore, Method,
    Metrics, PairKey, RoundPlan, SweepTarget, TopKPoint,
};
use mcua_core::fusion::ModelChoice;
use mcua_core::models::Learner;
use mcua_core::{FeatureExtractor, MatchingType, McuaConfig};
use serde::Serialize;

use crate::parallel::par_map;

#[derive(Debug, Clone)]
pub struct EvalSettings {
    pub methods: Vec<Method>,
    pub rnps: Vec<usize>,
    pub seed: u64,
    pub invert_folds: bool,
    pub config: McuaConfig,
    pub baseline: ModelChoice,
    pub jobs: usize,
}

/// Pooled and per-round confusion of one method at one imbalance ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodResult {
    pub method: Method,
    pub r_np: usize,
    pub rounds: Vec<Confusion>,
    pub pooled: Confusion,
}

impl MethodResult {
    pub fn metrics(&self) -> Metrics {
        self.pooled.metrics()
    }
}

pub fn build_plans(dataset: &Dataset, rnps: &[usize], seed: u64, invert_folds: bool) -> Result<Vec<RoundPlan>> {
    Ok(rnps
        .iter()
        .map(|&r| RoundPlan::new(dataset, r, seed, invert_folds))
        .collect::<mcua_core::Result<_>>()?)
}

/// Features of every pair used by any plan, computed on `jobs` threads.
pub fn build_store(
    extractor: &FeatureExtractor,
    dataset: &Dataset,
    plans: &[RoundPlan],
    needs: FeatureNeeds,
    jobs: usize,
) -> Result<FeatureStore> {
    let keys: Vec<PairKey> = plans
        .iter()
        .flat_map(|p| p.pairs.iter().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let computed = par_map(&keys, jobs, |&k| FeatureStore::compute_pair(extractor, dataset, k, needs));
    let mut pairs = BTreeMap::new();
    for (k, c) in keys.into_iter().zip(computed) {
        pairs.insert(k, c?);
    }
    Ok(FeatureStore::from_pairs(dataset, pairs, needs))
}

/// Runs every method on every plan; results are ordered by plan, then
/// method.
pub fn run_methods(
    store: &FeatureStore,
    plans: &[RoundPlan],
    methods: &[Method],
    config: &McuaConfig,
    baseline: &ModelChoice,
    jobs: usize,
) -> Result<Vec<MethodResult>> {
    let mut tasks = Vec::new();
    for (p, plan) in plans.iter().enumerate() {
        for (m, _) in methods.iter().enumerate() {
            for round in 0..plan.rounds.len() {
                tasks.push((p, m, round));
            }
        }
    }
    let outcomes = par_map(&tasks, jobs, |&(p, m, round)| {
        evaluate_fold(methods[m], store, &plans[p], round, config, baseline)
    });
    let mut results: Vec<MethodResult> = Vec::new();
    for (&(p, m, _), outcome) in tasks.iter().zip(outcomes) {
        let confusion = outcome?.confusion;
        let (method, r_np) = (methods[m], plans[p].r_np);
        match results.last_mut() {
            Some(r) if r.method == method && r.r_np == r_np => {
                r.rounds.push(confusion);
                r.pooled.add(&confusion);
            }
            _ => results.push(MethodResult {
                method,
                r_np,
                rounds: vec![confusion],
                pooled: confusion,
            }),
        }
    }
    Ok(results)
}

/// Feature needs, plans, store and results in one call.
pub fn run_eval(extractor: &FeatureExtractor, dataset: &Dataset, s: &EvalSettings) -> Result<Vec<MethodResult>> {
    let plans = build_plans(dataset, &s.rnps, s.seed, s.invert_folds)?;
    let store = build_store(extractor, dataset, &plans, FeatureNeeds::for_methods(&s.methods), s.jobs)?;
    run_methods(&store, &plans, &s.methods, &s.config, &s.baseline, s.jobs)
}

/// Top-k curves pooled over the rounds of `plan`, rounds run in parallel.
pub fn run_topk(
    store: &FeatureStore,
    plan: &RoundPlan,
    mt: MatchingType,
    k_values: &[usize],
    config: &McuaConfig,
    jobs: usize,
) -> Result<Vec<TopKPoint>> {
    let rounds: Vec<usize> = (0..plan.rounds.len()).collect();
    let per_round = par_map(&rounds, jobs, |&r| topk_round(store, plan, r, mt, k_values, config));
    let mut pooled = vec![Confusion::default(); k_values.len()];
    for r in per_round {
        for (p, c) in pooled.iter_mut().zip(r?) {
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

pub fn sweep_methods(target: SweepTarget) -> Vec<Method> {
    Learner::ALL.iter().map(|&l| target.method(l)).collect()
}

fn f4(x: f64) -> String {
    format!("{x:.4}")
}

fn find(results: &[MethodResult], method: Method, r_np: usize) -> Option<&MethodResult> {
    results.iter().find(|r| r.method == method && r.r_np == r_np)
}

fn rnps_of(results: &[MethodResult]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for r in results {
        if !out.contains(&r.r_np) {
            out.push(r.r_np);
        }
    }
    out
}

fn methods_of(results: &[MethodResult]) -> Vec<Method> {
    let mut out: Vec<Method> = Vec::new();
    for r in results {
        if !out.contains(&r.method) {
            out.push(r.method);
        }
    }
    out
}

/// Methods as rows; precision, recall and F1 per imbalance ratio.
pub fn comparison_table(results: &[MethodResult]) -> String {
    let rnps = rnps_of(results);
    let mut out = String::from("method");
    for r in &rnps {
        write!(out, "\tP@{r}\tR@{r}\tF1@{r}").unwrap();
    }
    out.push('\n');
    for m in methods_of(results) {
        out.push_str(&m.display_name());
        for &r in &rnps {
            match find(results, m, r) {
                Some(res) => {
                    let x = res.metrics();
                    write!(out, "\t{}\t{}\t{}", f4(x.precision), f4(x.recall), f4(x.f1)).unwrap();
                }
                None => out.push_str("\t-\t-\t-"),
            }
        }
        out.push('\n');
    }
    out
}

/// Learners as rows; "F1 (rank)" per imbalance ratio and the average rank.
pub fn ranking_table(results: &[MethodResult]) -> String {
    let rnps = rnps_of(results);
    let methods = methods_of(results);
    let mut ranks = vec![Vec::new(); methods.len()];
    for &r in &rnps {
        let f1: Vec<f64> = methods
            .iter()
            .map(|&m| find(results, m, r).map_or(0.0, |x| x.metrics().f1))
            .collect();
        for (i, rank) in rank_column(&f1).into_iter().enumerate() {
            ranks[i].push(rank);
        }
    }
    let mut out = String::from("learner");
    for r in &rnps {
        write!(out, "\tR_NP={r}").unwrap();
    }
    out.push_str("\tavg_rank\n");
    for (i, &m) in methods.iter().enumerate() {
        out.push_str(&learner_label(m));
        for (j, &r) in rnps.iter().enumerate() {
            let f1 = find(results, m, r).map_or(0.0, |x| x.metrics().f1);
            write!(out, "\t{} ({})", f4(f1), ranks[i][j]).unwrap();
        }
        writeln!(out, "\t{:.2}", average_rank(&ranks[i])).unwrap();
    }
    out
}

fn learner_label(m: Method) -> String {
    match m {
        Method::View(_, l) | Method::Classifier(l) => l.display_name().to_string(),
        other => other.display_name(),
    }
}

#[derive(Serialize)]
struct ResultLine<'a> {
    method: &'a str,
    r_np: usize,
    round: Option<usize>,
    tp: usize,
    fp: usize,
    tn: usize,
    #[serde(rename = "fn")]
    fn_: usize,
    precision: f64,
    recall: f64,
    f1: f64,
}

/// One JSON line per round and one pooled line (`round: null`) per result.
pub fn results_jsonl(results: &[MethodResult]) -> String {
    let mut out = String::new();
    for r in results {
        let id = r.method.id();
        let rows = r
            .rounds
            .iter()
            .enumerate()
            .map(|(k, c)| (Some(k), *c))
            .chain(std::iter::once((None, r.pooled)));
        for (round, c) in rows {
            let m = c.metrics();
            let line = ResultLine {
                method: &id,
                r_np: r.r_np,
                round,
                tp: c.tp,
                fp: c.fp,
                tn: c.tn,
                fn_: c.fn_,
                precision: m.precision,
                recall: m.recall,
                f1: m.f1,
            };
            out.push_str(&serde_json::to_string(&line).expect("serializable"));
            out.push('\n');
        }
    }
    out
}

pub fn topk_table(mt: MatchingType, points: &[TopKPoint]) -> String {
    let mut out = String::from("type\tk\tprecision\trecall\tf1\n");
    for p in points {
        writeln!(
            out,
            "{mt}\t{}\t{}\t{}\t{}",
            p.k,
            f4(p.metrics.precision),
            f4(p.metrics.recall),
            f4(p.metrics.f1)
        )
        .unwrap();
    }
    out
}
