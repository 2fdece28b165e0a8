//! Regularized logistic regression and squared-hinge SVM.
//!
//! Both minimize `C * sum_i loss(y_i, w.x_i + b) + R(w)` with labels mapped
//! to `y = +-1`, `R(w) = |w|^2 / 2` for the L2 penalty and `|w|_1` for L1.
//! The bias is never penalized. L2 problems use damped Newton steps with a
//! Cholesky solve; L1 problems use proximal Newton steps.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::format::{LineReader, LineWriter};
use super::TrainingSet;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinearFamily {
    Logistic,
    SquaredHinge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Penalty {
    L1,
    L2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearParams {
    pub c: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for LinearParams {
    fn default() -> Self {
        LinearParams {
            c: 1.0,
            tol: 1e-6,
            max_iter: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub family: LinearFamily,
    pub penalty: Penalty,
    pub c: f64,
    pub weights: Vec<f64>,
    pub bias: f64,
    /// Objective value after each outer iteration.
    pub trace: Vec<f64>,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + libm::exp(-z))
    } else {
        let e = libm::exp(z);
        e / (1.0 + e)
    }
}

/// `log(1 + exp(-m))` without overflow.
fn log1p_exp_neg(m: f64) -> f64 {
    if m > 0.0 {
        libm::log1p(libm::exp(-m))
    } else {
        -m + libm::log1p(libm::exp(m))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn label_sign(l: bool) -> f64 {
    if l {
        1.0
    } else {
        -1.0
    }
}

/// A training objective over a parameter vector `[w_1 .. w_d, b]`.
#[derive(Debug, Clone, Copy)]
pub struct LinearProblem<'a> {
    pub data: &'a TrainingSet,
    pub family: LinearFamily,
    pub penalty: Penalty,
    pub c: f64,
}

impl LinearProblem<'_> {
    fn margin(&self, p: &[f64], i: usize) -> f64 {
        let d = self.data.dim();
        dot(&p[..d], self.data.row(i)) + p[d]
    }

    fn loss(&self, y: f64, z: f64) -> f64 {
        match self.family {
            LinearFamily::Logistic => log1p_exp_neg(y * z),
            LinearFamily::SquaredHinge => {
                let h = 1.0 - y * z;
                if h > 0.0 {
                    h * h
                } else {
                    0.0
                }
            }
        }
    }

    /// Derivative of the loss with respect to the margin `z`.
    fn dloss(&self, y: f64, z: f64) -> f64 {
        match self.family {
            LinearFamily::Logistic => -y * sigmoid(-y * z),
            LinearFamily::SquaredHinge => {
                let h = 1.0 - y * z;
                if h > 0.0 {
                    -2.0 * y * h
                } else {
                    0.0
                }
            }
        }
    }

    /// Second derivative (generalized for the squared hinge).
    fn d2loss(&self, y: f64, z: f64) -> f64 {
        match self.family {
            LinearFamily::Logistic => {
                let s = sigmoid(z);
                s * (1.0 - s)
            }
            LinearFamily::SquaredHinge => {
                if 1.0 - y * z > 0.0 {
                    2.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Differentiable part: `C * sum loss`, plus `|w|^2 / 2` under L2.
    pub fn smooth_objective(&self, p: &[f64]) -> f64 {
        let d = self.data.dim();
        let mut total = 0.0;
        for i in 0..self.data.len() {
            total += self.loss(label_sign(self.data.label(i)), self.margin(p, i));
        }
        total *= self.c;
        if self.penalty == Penalty::L2 {
            total += 0.5 * dot(&p[..d], &p[..d]);
        }
        total
    }

    pub fn smooth_gradient(&self, p: &[f64]) -> Vec<f64> {
        let d = self.data.dim();
        let mut g = vec![0.0; d + 1];
        for i in 0..self.data.len() {
            let y = label_sign(self.data.label(i));
            let dl = self.c * self.dloss(y, self.margin(p, i));
            if dl != 0.0 {
                for (gj, &x) in g.iter_mut().zip(self.data.row(i)) {
                    *gj += dl * x;
                }
                g[d] += dl;
            }
        }
        if self.penalty == Penalty::L2 {
            for j in 0..d {
                g[j] += p[j];
            }
        }
        g
    }

    pub fn penalty_value(&self, p: &[f64]) -> f64 {
        let d = self.data.dim();
        match self.penalty {
            Penalty::L1 => p[..d].iter().map(|w| libm::fabs(*w)).sum(),
            Penalty::L2 => 0.0,
        }
    }

    /// The full objective.
    pub fn objective(&self, p: &[f64]) -> f64 {
        self.smooth_objective(p) + self.penalty_value(p)
    }

    fn hessian(&self, p: &[f64]) -> Vec<f64> {
        let d = self.data.dim();
        let m = d + 1;
        let mut h = vec![0.0; m * m];
        let mut xi = vec![0.0; m];
        for i in 0..self.data.len() {
            let y = label_sign(self.data.label(i));
            let w = self.c * self.d2loss(y, self.margin(p, i));
            if w == 0.0 {
                continue;
            }
            xi[..d].copy_from_slice(self.data.row(i));
            xi[d] = 1.0;
            for a in 0..m {
                let wa = w * xi[a];
                if wa == 0.0 {
                    continue;
                }
                let row = &mut h[a * m..a * m + a + 1];
                for (hab, &xb) in row.iter_mut().zip(&xi[..=a]) {
                    *hab += wa * xb;
                }
            }
        }
        for a in 0..m {
            for b in 0..a {
                h[b * m + a] = h[a * m + b];
            }
        }
        for j in 0..d {
            h[j * m + j] += 1.0;
        }
        h[d * m + d] += 1e-10;
        h
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(libm::fabs(*x)))
}

/// Solves `A x = b` for symmetric positive definite `A` (row-major `m x m`).
fn cholesky_solve(a: &[f64], b: &[f64], m: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..=i {
            let mut s = a[i * m + j];
            for k in 0..j {
                s -= l[i * m + k] * l[j * m + k];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return None;
                }
                l[i * m + i] = libm::sqrt(s);
            } else {
                l[i * m + j] = s / l[j * m + j];
            }
        }
    }
    let mut y = vec![0.0; m];
    for i in 0..m {
        let s = b[i] - dot(&l[i * m..i * m + i], &y[..i]);
        y[i] = s / l[i * m + i];
    }
    let mut x = vec![0.0; m];
    for i in (0..m).rev() {
        let mut s = y[i];
        for k in i + 1..m {
            s -= l[k * m + i] * x[k];
        }
        x[i] = s / l[i * m + i];
    }
    Some(x)
}

fn newton(problem: &LinearProblem<'_>, params: &LinearParams) -> (Vec<f64>, Vec<f64>) {
    let m = problem.data.dim() + 1;
    let mut p = vec![0.0; m];
    let mut f = problem.objective(&p);
    let mut trace = Vec::new();
    let mut g = problem.smooth_gradient(&p);
    let g0 = inf_norm(&g).max(1.0);
    for _ in 0..params.max_iter {
        if inf_norm(&g) <= params.tol * g0 {
            break;
        }
        let h = problem.hessian(&p);
        let neg_g: Vec<f64> = g.iter().map(|x| -x).collect();
        let step = cholesky_solve(&h, &neg_g, m).unwrap_or_else(|| neg_g.clone());
        let slope = dot(&g, &step);
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..50 {
            let cand: Vec<f64> = p.iter().zip(&step).map(|(a, s)| a + alpha * s).collect();
            let fc = problem.objective(&cand);
            if fc <= f + 1e-4 * alpha * slope {
                accepted = Some((cand, fc));
                break;
            }
            alpha *= 0.5;
        }
        let Some((cand, fc)) = accepted else { break };
        let progress = f - fc;
        p = cand;
        f = fc;
        trace.push(f);
        g = problem.smooth_gradient(&p);
        if progress <= f64::EPSILON * libm::fabs(f) {
            break;
        }
    }
    (p, trace)
}

/// Minimum-norm subgradient magnitude of coordinate `j` with smooth
/// gradient `g` at weight `w`. The bias (`penalized == false`) has none.
fn violation(g: f64, w: f64, penalized: bool) -> f64 {
    if !penalized {
        libm::fabs(g)
    } else if w > 0.0 {
        libm::fabs(g + 1.0)
    } else if w < 0.0 {
        libm::fabs(g - 1.0)
    } else {
        (libm::fabs(g) - 1.0).max(0.0)
    }
}

/// Proximal Newton for the L1 problems. Each outer step minimizes the
/// second-order model of the loss plus `|w|_1` by coordinate descent on the
/// dense Hessian, then searches along the resulting direction. Coordinates
/// already optimal within the inner tolerance are left alone, so a column
/// that duplicates an earlier one stays exactly zero.
fn proximal_newton(problem: &LinearProblem<'_>, params: &LinearParams) -> (Vec<f64>, Vec<f64>) {
    let data = problem.data;
    let (n, d) = (data.len(), data.dim());
    let m = d + 1;
    let mut p = vec![0.0; m];
    let mut trace = Vec::new();
    let mut g = problem.smooth_gradient(&p);
    let outer_violation = |g: &[f64], p: &[f64]| -> f64 {
        (0..m).map(|j| violation(g[j], p[j], j < d)).fold(0.0, f64::max)
    };
    let threshold = params.tol * outer_violation(&g, &p).max(1.0);
    let mut f = problem.objective(&p);
    let mut z: Vec<f64> = vec![0.0; n];
    for _ in 0..params.max_iter {
        let current = outer_violation(&g, &p);
        if current <= threshold {
            break;
        }
        let mut h = problem.hessian(&p);
        // `hessian` adds the L2 ridge; the L1 model has none
        for j in 0..d {
            h[j * m + j] += 1e-10 - 1.0;
        }
        // inner coordinate descent on the model, in terms of the step `s`
        let inner_tol = (0.1 * current).max(0.5 * threshold);
        let mut s = vec![0.0; m];
        let mut hs = vec![0.0; m];
        for _ in 0..500 {
            let mut worst: f64 = 0.0;
            for j in 0..m {
                let penalized = j < d;
                let gj = g[j] + hs[j];
                let hjj = h[j * m + j].max(1e-12);
                let u = p[j] + s[j];
                let v = violation(gj, u, penalized);
                worst = worst.max(v);
                if v <= inner_tol {
                    continue;
                }
                let target = if penalized {
                    let t = u - gj / hjj;
                    let a = libm::fabs(t) - 1.0 / hjj;
                    if a > 0.0 {
                        libm::copysign(a, t)
                    } else {
                        0.0
                    }
                } else {
                    u - gj / hjj
                };
                let delta = target - u;
                if delta != 0.0 {
                    s[j] += delta;
                    for (hk, &hjk) in hs.iter_mut().zip(&h[j * m..(j + 1) * m]) {
                        *hk += delta * hjk;
                    }
                }
            }
            if worst <= inner_tol {
                break;
            }
        }
        // margins along the step, then Armijo on the full objective
        for (i, zi) in z.iter_mut().enumerate() {
            *zi = dot(&s[..d], data.row(i)) + s[d];
        }
        let l1 = |w: &[f64]| w[..d].iter().map(|x| libm::fabs(*x)).sum::<f64>();
        let base_l1 = l1(&p);
        let mut bound = dot(&g, &s);
        let full: Vec<f64> = p.iter().zip(&s).map(|(a, b)| a + b).collect();
        bound += l1(&full) - base_l1;
        if bound >= 0.0 {
            break;
        }
        let margins: Vec<f64> = (0..n).map(|i| problem.margin(&p, i)).collect();
        let ys: Vec<f64> = (0..n).map(|i| label_sign(data.label(i))).collect();
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let cand: Vec<f64> = p.iter().zip(&s).map(|(a, b)| a + lambda * b).collect();
            let loss: f64 = (0..n).map(|i| problem.loss(ys[i], margins[i] + lambda * z[i])).sum();
            let fc = problem.c * loss + l1(&cand);
            if fc - f <= 0.01 * lambda * bound {
                accepted = Some((cand, fc));
                break;
            }
            lambda *= 0.5;
        }
        let Some((cand, fc)) = accepted else { break };
        let progress = f - fc;
        p = cand;
        f = fc;
        trace.push(f);
        g = problem.smooth_gradient(&p);
        if progress <= f64::EPSILON * libm::fabs(f) {
            break;
        }
    }
    (p, trace)
}

impl LinearModel {
    pub fn train(
        data: &TrainingSet,
        family: LinearFamily,
        penalty: Penalty,
        params: &LinearParams,
    ) -> Result<LinearModel> {
        data.require_both_labels()?;
        let problem = LinearProblem {
            data,
            family,
            penalty,
            c: params.c,
        };
        let (p, trace) = match penalty {
            Penalty::L2 => newton(&problem, params),
            Penalty::L1 => proximal_newton(&problem, params),
        };
        let d = data.dim();
        Ok(LinearModel {
            family,
            penalty,
            c: params.c,
            weights: p[..d].to_vec(),
            bias: p[d],
            trace,
        })
    }

    pub fn decision_value(&self, x: &[f64]) -> f64 {
        dot(&self.weights, x) + self.bias
    }

    pub fn predict_proba(&self, x: &[f64]) -> f64 {
        sigmoid(self.decision_value(x))
    }

    pub(super) fn write(&self, w: &mut LineWriter) {
        let family = match self.family {
            LinearFamily::Logistic => "logistic",
            LinearFamily::SquaredHinge => "squared-hinge",
        };
        let penalty = match self.penalty {
            Penalty::L1 => "l1",
            Penalty::L2 => "l2",
        };
        w.line(&format!("family {family}"));
        w.line(&format!("penalty {penalty}"));
        w.line(&format!("c {}", self.c));
        w.line(&format!("dim {}", self.weights.len()));
        w.line(&format!("bias {}", self.bias));
        w.floats("weights", &self.weights);
    }

    pub(super) fn read(r: &mut LineReader<'_>) -> Result<LinearModel> {
        let family = match r.keyword("family")?.as_str() {
            "logistic" => LinearFamily::Logistic,
            "squared-hinge" => LinearFamily::SquaredHinge,
            other => return Err(r.error(&format!("unknown family {other:?}"))),
        };
        let penalty = match r.keyword("penalty")?.as_str() {
            "l1" => Penalty::L1,
            "l2" => Penalty::L2,
            other => return Err(r.error(&format!("unknown penalty {other:?}"))),
        };
        let c = r.parse_keyword("c")?;
        let dim: usize = r.parse_keyword("dim")?;
        let bias = r.parse_keyword("bias")?;
        let weights = r.floats("weights", dim)?;
        Ok(LinearModel {
            family,
            penalty,
            c,
            weights,
            bias,
            trace: Vec::new(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Model;

    fn separable() -> TrainingSet {
        let rows = [
            [0.0, 0.1],
            [0.2, 0.0],
            [0.1, 0.3],
            [0.9, 1.0],
            [1.0, 0.8],
            [0.8, 0.9],
        ];
        let mut t = TrainingSet::new(2);
        for (i, r) in rows.iter().enumerate() {
            t.push(r, i >= 3).unwrap();
        }
        t
    }

    fn accuracy(m: &LinearModel, t: &TrainingSet) -> f64 {
        let ok = (0..t.len())
            .filter(|&i| (m.predict_proba(t.row(i)) >= 0.5) == t.label(i))
            .count();
        ok as f64 / t.len() as f64
    }

    #[test]
    fn all_families_separate_toy_data() {
        let t = separable();
        for family in [LinearFamily::Logistic, LinearFamily::SquaredHinge] {
            for penalty in [Penalty::L1, Penalty::L2] {
                let params = LinearParams {
                    c: 10.0,
                    ..LinearParams::default()
                };
                let m = LinearModel::train(&t, family, penalty, &params).unwrap();
                assert_eq!(accuracy(&m, &t), 1.0, "{family:?} {penalty:?}");
            }
        }
    }

    #[test]
    fn zero_features_fit_prior_log_odds() {
        let mut t = TrainingSet::new(2);
        for i in 0..10 {
            t.push(&[0.0, 0.0], i < 3).unwrap();
        }
        for penalty in [Penalty::L1, Penalty::L2] {
            let m = LinearModel::train(&t, LinearFamily::Logistic, penalty, &LinearParams::default())
                .unwrap();
            assert!(m.weights.iter().all(|w| w.abs() < 1e-9));
            assert!((m.bias - libm::log(3.0 / 7.0)).abs() < 1e-5, "{}", m.bias);
        }
    }

    #[test]
    fn newton_objective_decreases_monotonically() {
        let t = separable();
        let m = LinearModel::train(&t, LinearFamily::SquaredHinge, Penalty::L2, &LinearParams::default())
            .unwrap();
        assert!(m.trace.windows(2).all(|w| w[1] <= w[0]));
        let m = LinearModel::train(&t, LinearFamily::Logistic, Penalty::L1, &LinearParams::default())
            .unwrap();
        assert!(m.trace.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn gradient_vanishes_at_l2_optimum() {
        let t = separable();
        for family in [LinearFamily::Logistic, LinearFamily::SquaredHinge] {
            let m = LinearModel::train(&t, family, Penalty::L2, &LinearParams::default()).unwrap();
            let problem = LinearProblem {
                data: &t,
                family,
                penalty: Penalty::L2,
                c: 1.0,
            };
            let mut p = m.weights.clone();
            p.push(m.bias);
            assert!(inf_norm(&problem.smooth_gradient(&p)) < 1e-5);
        }
    }

    #[test]
    fn l1_zeroes_a_duplicated_column() {
        let mut t = TrainingSet::new(2);
        for i in 0..40 {
            let x = i as f64 / 40.0 + if i % 2 == 0 { 0.05 } else { 0.0 };
            t.push(&[x, x], x > 0.5).unwrap();
        }
        let params = LinearParams {
            c: 0.5,
            ..LinearParams::default()
        };
        let m = LinearModel::train(&t, LinearFamily::Logistic, Penalty::L1, &params).unwrap();
        assert!(m.weights.contains(&0.0), "{:?}", m.weights);
    }

    #[test]
    fn serialization_is_bit_exact() {
        let t = separable();
        let m = LinearModel::train(&t, LinearFamily::Logistic, Penalty::L2, &LinearParams::default())
            .unwrap();
        let model = Model::Linear(m);
        let back = Model::from_text(&model.to_text()).unwrap();
        match (&model, &back) {
            (Model::Linear(a), Model::Linear(b)) => {
                assert_eq!(a.bias.to_bits(), b.bias.to_bits());
                for (x, y) in a.weights.iter().zip(&b.weights) {
                    assert_eq!(x.to_bits(), y.to_bits());
                }
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn zero_model_predicts_one_half() {
        let m = LinearModel {
            family: LinearFamily::Logistic,
            penalty: Penalty::L2,
            c: 1.0,
            weights: vec![0.0; 3],
            bias: 0.0,
            trace: Vec::new(),
        };
        assert_eq!(m.predict_proba(&[1.0, 2.0, 3.0]), 0.5);
    }
}
