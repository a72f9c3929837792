//! Closed-form estimators for `dX = μ_Y dt + α dW`.
//!
//! The per-path statistic `Z^j = (1/n) Σ_k (X_{k+1} − X_k)/Δ` telescopes to
//! `X_n − X_0`, so the estimators only need one number per path.

use serde::{Deserialize, Serialize};

use super::schedule::log_level;
use crate::error::{Error, Result};
use crate::model::Label;
use crate::simulate::{Dataset, Path};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantModelEstimate {
    pub mu0_hat: f64,
    pub mu1_hat: f64,
    /// Raw unbiased variance over class-1 paths (0 when `N_1 ≤ 1`).
    pub alpha_sq_hat: f64,
    /// `max(α̂², 1/log N)`.
    pub alpha_sq_tilde: f64,
    pub p_hat: (f64, f64),
    pub class_counts: (usize, usize),
}

/// Per-path statistic `Z^j = X_n − X_0`.
pub fn path_statistic(path: &Path) -> f64 {
    path.displacement()
}

/// Streaming accumulator over `(label, Z^j)` pairs. Pushing in a fixed
/// order gives bit-identical estimates.
#[derive(Debug, Clone, Default)]
pub struct ConstantStats {
    count: [usize; 2],
    mean: [f64; 2],
    // Welford sum of squared deviations for each class.
    sq_dev: [f64; 2],
}

impl ConstantStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, label: Label, statistic: f64) {
        let c = usize::from(label);
        self.count[c] += 1;
        let delta = statistic - self.mean[c];
        self.mean[c] += delta / self.count[c] as f64;
        self.sq_dev[c] += delta * (statistic - self.mean[c]);
    }

    pub fn total(&self) -> usize {
        self.count[0] + self.count[1]
    }

    /// Finishes with truncation level `1/log N` for sample size `n_total`.
    pub fn finish(&self, n_total: usize) -> Result<ConstantModelEstimate> {
        let total = self.total();
        if total == 0 {
            return Err(Error::EmptySelection("no paths to estimate from".into()));
        }
        let mean = |c: usize| if self.count[c] > 1 { self.mean[c] } else { 0.0 };
        let alpha_sq_hat = if self.count[1] > 1 {
            self.sq_dev[1] / (self.count[1] - 1) as f64
        } else {
            0.0
        };
        Ok(ConstantModelEstimate {
            mu0_hat: mean(0),
            mu1_hat: mean(1),
            alpha_sq_hat,
            alpha_sq_tilde: truncate_variance(alpha_sq_hat, n_total),
            p_hat: (
                self.count[0] as f64 / total as f64,
                self.count[1] as f64 / total as f64,
            ),
            class_counts: (self.count[0], self.count[1]),
        })
    }
}

/// `α̃² = α̂²` if `α̂² ≥ 1/log N`, else `1/log N`.
pub fn truncate_variance(alpha_sq_hat: f64, n_total: usize) -> f64 {
    let floor = 1.0 / log_level(n_total);
    if alpha_sq_hat >= floor {
        alpha_sq_hat
    } else {
        floor
    }
}

/// Closed-form estimates `(μ̂0, μ̂1, α̃², p̂)` from a labelled dataset.
pub fn constant_estimators(dataset: &Dataset, n_total: usize) -> Result<ConstantModelEstimate> {
    let mut stats = ConstantStats::new();
    for path in &dataset.paths {
        let label = path
            .label
            .ok_or_else(|| Error::InvalidArgument("unlabelled path in training set".into()))?;
        stats.push(label, path_statistic(path));
    }
    stats.finish(n_total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MixtureModel;
    use crate::simulate::{generate_dataset, responses_z};

    #[test]
    fn statistic_telescopes() {
        let model = MixtureModel::bump_example();
        let ds = generate_dataset(&model, 20, 300, 4).unwrap();
        for p in &ds.paths {
            let z = responses_z(p);
            let avg = z.iter().sum::<f64>() / z.len() as f64;
            assert!((avg - path_statistic(p)).abs() < 1e-12);
        }
    }

    #[test]
    fn consistent_on_constant_model() {
        let model = MixtureModel::constant(0.0, 1.0, 1.0, 0.5).unwrap();
        let ds = generate_dataset(&model, 10_000, 100, 77).unwrap();
        let est = constant_estimators(&ds, ds.len()).unwrap();
        assert!((est.mu1_hat - 1.0).abs() < 0.03, "{}", est.mu1_hat);
        assert!((est.mu0_hat).abs() < 0.03);
        assert!((est.alpha_sq_tilde - 1.0).abs() < 0.05, "{}", est.alpha_sq_tilde);
        assert!((est.p_hat.0 + est.p_hat.1 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_class_one() {
        let mut stats = ConstantStats::new();
        stats.push(0, 0.3);
        stats.push(0, 0.5);
        stats.push(0, 0.1);
        stats.push(1, 2.0);
        let est = stats.finish(4).unwrap();
        assert_eq!(est.mu1_hat, 0.0);
        assert_eq!(est.alpha_sq_hat, 0.0);
        assert_eq!(est.alpha_sq_tilde, 1.0 / 4f64.ln());
        assert!((est.mu0_hat - 0.3).abs() < 1e-15);
        assert_eq!(est.p_hat, (0.75, 0.25));
    }

    #[test]
    fn welford_matches_two_pass() {
        let xs = [1.5, -0.2, 3.3, 0.7, 2.2, 1.1];
        let mut stats = ConstantStats::new();
        xs.iter().for_each(|&x| stats.push(1, x));
        let est = stats.finish(100).unwrap();
        let mean = xs.iter().sum::<f64>() / 6.0;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 5.0;
        assert!((est.mu1_hat - mean).abs() < 1e-14);
        assert!((est.alpha_sq_hat - var).abs() < 1e-14);
    }

    #[test]
    fn empty_is_an_error() {
        assert!(ConstantStats::new().finish(10).is_err());
    }
}
