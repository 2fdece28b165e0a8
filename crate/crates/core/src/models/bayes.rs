use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::format::{LineReader, LineWriter};
use super::TrainingSet;
use crate::error::Result;

/// Gaussian naive Bayes with per-class diagonal variances.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianNb {
    /// Index 0 is the negative class, 1 the positive class.
    priors: [f64; 2],
    means: [Vec<f64>; 2],
    variances: [Vec<f64>; 2],
}

impl GaussianNb {
    /// Variances below `var_floor` are raised to it.
    pub fn train(data: &TrainingSet, var_floor: f64) -> Result<GaussianNb> {
        data.require_both_labels()?;
        let d = data.dim();
        let mut counts = [0.0f64; 2];
        let mut means = [vec![0.0; d], vec![0.0; d]];
        for i in 0..data.len() {
            let c = usize::from(data.label(i));
            counts[c] += 1.0;
            for (m, &x) in means[c].iter_mut().zip(data.row(i)) {
                *m += x;
            }
        }
        for c in 0..2 {
            means[c].iter_mut().for_each(|m| *m /= counts[c]);
        }
        let mut variances = [vec![0.0; d], vec![0.0; d]];
        for i in 0..data.len() {
            let c = usize::from(data.label(i));
            for ((v, &x), &m) in variances[c].iter_mut().zip(data.row(i)).zip(&means[c]) {
                *v += (x - m) * (x - m);
            }
        }
        for c in 0..2 {
            variances[c]
                .iter_mut()
                .for_each(|v| *v = (*v / counts[c]).max(var_floor));
        }
        let n = data.len() as f64;
        Ok(GaussianNb {
            priors: [counts[0] / n, counts[1] / n],
            means,
            variances,
        })
    }

    pub fn dim(&self) -> usize {
        self.means[0].len()
    }

    pub fn variances(&self, positive: bool) -> &[f64] {
        &self.variances[usize::from(positive)]
    }

    fn log_joint(&self, c: usize, x: &[f64]) -> f64 {
        let mut s = libm::log(self.priors[c]);
        for ((&xi, &m), &v) in x.iter().zip(&self.means[c]).zip(&self.variances[c]) {
            s -= 0.5 * (libm::log(2.0 * core::f64::consts::PI * v) + (xi - m) * (xi - m) / v);
        }
        s
    }

    /// Posterior probability of the positive class.
    pub fn predict_proba(&self, x: &[f64]) -> f64 {
        let neg = self.log_joint(0, x);
        let pos = self.log_joint(1, x);
        // 1 / (1 + exp(neg - pos)), computed on the stable side
        let diff = neg - pos;
        if diff >= 0.0 {
            let e = libm::exp(-diff);
            e / (1.0 + e)
        } else {
            1.0 / (1.0 + libm::exp(diff))
        }
    }

    pub(super) fn write(&self, w: &mut LineWriter) {
        w.line(&format!("dim {}", self.dim()));
        w.floats("priors", &self.priors);
        for c in 0..2 {
            w.floats("means", &self.means[c]);
            w.floats("variances", &self.variances[c]);
        }
    }

    pub(super) fn read(r: &mut LineReader<'_>) -> Result<GaussianNb> {
        let d: usize = r.parse_keyword("dim")?;
        let p = r.floats("priors", 2)?;
        let m0 = r.floats("means", d)?;
        let v0 = r.floats("variances", d)?;
        let m1 = r.floats("means", d)?;
        let v1 = r.floats("variances", d)?;
        if v0.iter().chain(&v1).any(|&v| v <= 0.0) {
            return Err(r.error("variances must be positive"));
        }
        Ok(GaussianNb {
            priors: [p[0], p[1]],
            means: [m0, m1],
            variances: [v0, v1],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Model;

    #[test]
    fn symmetric_blobs_meet_at_zero() {
        let mut t = TrainingSet::new(1);
        for x in [-1.2, -1.0, -0.8] {
            t.push(&[x], false).unwrap();
        }
        for x in [0.8, 1.0, 1.2] {
            t.push(&[x], true).unwrap();
        }
        let m = GaussianNb::train(&t, 1e-9).unwrap();
        assert!((m.predict_proba(&[0.0]) - 0.5).abs() < 1e-12);
        assert!(m.predict_proba(&[0.1]) > 0.5);
        assert!(m.predict_proba(&[-0.1]) < 0.5);
    }

    #[test]
    fn identical_classes_give_one_half() {
        let mut t = TrainingSet::new(2);
        for label in [false, true] {
            for x in [0.1, 0.5, 0.9] {
                t.push(&[x, 1.0 - x], label).unwrap();
            }
        }
        let m = GaussianNb::train(&t, 1e-9).unwrap();
        for x in [0.0, 0.3, 7.0] {
            assert_eq!(m.predict_proba(&[x, x]), 0.5);
        }
    }

    #[test]
    fn constant_feature_gets_the_floor() {
        let mut t = TrainingSet::new(1);
        t.push(&[2.0], true).unwrap();
        t.push(&[2.0], false).unwrap();
        let m = GaussianNb::train(&t, 1e-9).unwrap();
        assert_eq!(m.variances(true), &[1e-9]);
        let model = Model::NaiveBayes(m);
        assert_eq!(Model::from_text(&model.to_text()).unwrap(), model);
    }
}
