//! Learner numerics: analytic gradients against finite differences,
//! optimality conditions at the solution, and forest/tree agreement.

use mcua_core::models::{
    train, ForestModel, ForestParams, GaussianNb, Hyperparams, Learner, LinearFamily, LinearModel, LinearParams,
    LinearProblem, Model, Penalty, TrainingSet, TreeModel, TreeParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Two overlapping clouds in `d` dimensions.
fn clouds(rng: &mut ChaCha8Rng, n: usize, d: usize) -> TrainingSet {
    let mut data = TrainingSet::new(d);
    for i in 0..n {
        let label = i % 2 == 0;
        let shift = if label { 0.6 } else { -0.6 };
        let row: Vec<f64> = (0..d).map(|j| rng.gen_range(-1.0..1.0) + if j < 2 { shift } else { 0.0 }).collect();
        data.push(&row, label).unwrap();
    }
    data
}

fn random_point(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-2.0..2.0)).collect()
}

#[test]
fn gradients_match_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let data = clouds(&mut rng, 40, 5);
    for family in [LinearFamily::Logistic, LinearFamily::SquaredHinge] {
        for penalty in [Penalty::L1, Penalty::L2] {
            let problem = LinearProblem { data: &data, family, penalty, c: 0.7 };
            for _ in 0..20 {
                let p = random_point(&mut rng, 6);
                let g = problem.smooth_gradient(&p);
                for j in 0..p.len() {
                    let h = 1e-6;
                    let (mut up, mut down) = (p.clone(), p.clone());
                    up[j] += h;
                    down[j] -= h;
                    let fd = (problem.smooth_objective(&up) - problem.smooth_objective(&down)) / (2.0 * h);
                    let scale = 1.0 + g[j].abs();
                    assert!((fd - g[j]).abs() / scale < 1e-5, "{family:?} {penalty:?} coord {j}: {fd} vs {}", g[j]);
                }
            }
        }
    }
}

/// Checks the stationarity conditions of the trained parameters.
fn assert_optimal(model: &LinearModel, data: &TrainingSet, tol: f64) {
    let problem = LinearProblem { data, family: model.family, penalty: model.penalty, c: model.c };
    let mut p = model.weights.clone();
    p.push(model.bias);
    let g = problem.smooth_gradient(&p);
    let d = data.dim();
    assert!(g[d].abs() < tol, "bias gradient {}", g[d]);
    for j in 0..d {
        let viol = match model.penalty {
            Penalty::L2 => g[j].abs(),
            Penalty::L1 if p[j] != 0.0 => (g[j] + p[j].signum()).abs(),
            Penalty::L1 => (g[j].abs() - 1.0).max(0.0),
        };
        assert!(viol < tol, "{:?} {:?} coord {j}: violation {viol}", model.family, model.penalty);
    }
}

#[test]
fn trained_linear_models_are_stationary() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for trial in 0..5 {
        let data = clouds(&mut rng, 80, 6);
        for family in [LinearFamily::Logistic, LinearFamily::SquaredHinge] {
            for penalty in [Penalty::L1, Penalty::L2] {
                let params = LinearParams { c: 0.5 + trial as f64, tol: 1e-8, max_iter: 5000 };
                let m = LinearModel::train(&data, family, penalty, &params).unwrap();
                assert_optimal(&m, &data, 1e-4);
                // the trace never goes up
                for w in m.trace.windows(2) {
                    assert!(w[1] <= w[0] + 1e-9, "{family:?} {penalty:?} {:?}", m.trace);
                }
            }
        }
    }
}

#[test]
fn strong_l1_penalty_gives_all_zero_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let data = clouds(&mut rng, 60, 4);
    let params = LinearParams { c: 1e-4, ..LinearParams::default() };
    for family in [LinearFamily::Logistic, LinearFamily::SquaredHinge] {
        let m = LinearModel::train(&data, family, Penalty::L1, &params).unwrap();
        assert!(m.weights.iter().all(|&w| w == 0.0), "{:?}", m.weights);
    }
}

#[test]
fn single_tree_forest_equals_cart() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for case in 0..50 {
        let d = rng.gen_range(1..6);
        let mut data = TrainingSet::new(d);
        for i in 0..rng.gen_range(4..40) {
            // coarse values force ties between candidate thresholds
            let row: Vec<f64> = (0..d).map(|_| f64::from(rng.gen_range(0..4u8)) / 3.0).collect();
            data.push(&row, i % 3 == 0 || rng.gen_bool(0.2)).unwrap();
        }
        let tree_params = TreeParams { max_depth: None, min_leaf: 1, mtry: Some(d) };
        let forest = ForestModel::train(
            &data,
            &ForestParams { n_trees: 1, tree: tree_params.clone(), bootstrap: false, seed: case },
        )
        .unwrap();
        let cart = TreeModel::train(&data, &TreeParams { mtry: None, ..tree_params }, case).unwrap();
        for _ in 0..30 {
            let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-0.2..1.2)).collect();
            let vote = if cart.predict_proba(&x) >= 0.5 { 1.0 } else { 0.0 };
            assert_eq!(forest.predict_proba(&x), vote, "case {case}");
        }
        let mdi = forest.impurity_importances();
        let raw = cart.impurity_decreases();
        let total: f64 = raw.iter().sum();
        for (a, b) in mdi.iter().zip(&raw) {
            let expect = if total > 0.0 { b / total } else { 1.0 / d as f64 };
            assert!((a - expect).abs() < 1e-12, "case {case}");
        }
    }
}

#[test]
fn forest_importances_are_a_distribution() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for seed in 0..10 {
        let data = clouds(&mut rng, 60, 7);
        let params = Hyperparams { n_trees: 15, seed, ..Hyperparams::default() };
        let Model::Forest(f) = train(Learner::RandomForest, &params, &data).unwrap() else {
            panic!("expected a forest");
        };
        let mdi = f.impurity_importances();
        assert_eq!(mdi.len(), 7);
        assert!(mdi.iter().all(|&v| v >= 0.0));
        assert!((mdi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // the two informative columns carry most of the mass
        assert!(mdi[0] + mdi[1] > 0.4, "{mdi:?}");
    }
}

/// Log density of a diagonal Gaussian, written out directly.
fn log_gauss(x: &[f64], mean: &[f64], var: &[f64]) -> f64 {
    x.iter()
        .zip(mean)
        .zip(var)
        .map(|((x, m), v)| -0.5 * (2.0 * std::f64::consts::PI * v).ln() - (x - m).powi(2) / (2.0 * v))
        .sum()
}

#[test]
fn naive_bayes_matches_the_closed_form_posterior() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let data = clouds(&mut rng, 50, 3);
    let nb = GaussianNb::train(&data, 1e-9).unwrap();
    let mut stats = Vec::new();
    for label in [false, true] {
        let rows: Vec<&[f64]> = (0..data.len()).filter(|&i| data.label(i) == label).map(|i| data.row(i)).collect();
        let n = rows.len() as f64;
        let mean: Vec<f64> = (0..3).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n).collect();
        let var: Vec<f64> = (0..3).map(|j| rows.iter().map(|r| (r[j] - mean[j]).powi(2)).sum::<f64>() / n).collect();
        stats.push((n / data.len() as f64, mean, var));
    }
    for _ in 0..50 {
        let x = random_point(&mut rng, 3);
        let l0 = stats[0].0.ln() + log_gauss(&x, &stats[0].1, &stats[0].2);
        let l1 = stats[1].0.ln() + log_gauss(&x, &stats[1].1, &stats[1].2);
        let expect = 1.0 / (1.0 + (l0 - l1).exp());
        assert!((nb.predict_proba(&x) - expect).abs() < 1e-9);
    }
}

#[test]
fn every_learner_round_trips_through_text() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let data = clouds(&mut rng, 40, 4);
    let params = Hyperparams { n_trees: 5, ..Hyperparams::default() };
    for learner in Learner::ALL {
        let m = train(learner, &params, &data).unwrap();
        let back = Model::from_text(&m.to_text()).unwrap();
        for _ in 0..20 {
            let x = random_point(&mut rng, 4);
            assert_eq!(m.predict_proba(&x).unwrap(), back.predict_proba(&x).unwrap(), "{learner}");
        }
    }
}
