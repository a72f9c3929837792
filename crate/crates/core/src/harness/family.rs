//! Bump-sum hypotheses used by the lower-bound construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{bump_kernel, CoefficientFn};

/// Draws allowed per requested member before selection gives up.
const DRAWS_PER_MEMBER: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisFamily {
    pub beta: f64,
    #[serde(rename = "R")]
    pub radius: f64,
    pub c0: f64,
    pub kappa: f64,
    #[serde(rename = "N")]
    pub n_total: usize,
    pub m: usize,
    pub h: f64,
    pub members: Vec<CoefficientFn>,
}

/// `m = ⌈c0·N^{1/(2β+1)}⌉`.
pub fn bump_count(beta: f64, c0: f64, n_total: usize) -> usize {
    let m = (c0 * (n_total as f64).powf(1.0 / (2.0 * beta + 1.0))).ceil();
    (m as usize).max(1)
}

pub fn hamming(a: &[bool], b: &[bool]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

fn member(base: f64, h: f64, beta: f64, radius: f64, weights: Vec<bool>) -> CoefficientFn {
    CoefficientFn::BumpSum {
        base,
        h,
        beta,
        radius,
        weights,
    }
}

/// Greedy selection of `count` bump sums with pairwise Hamming distance
/// `≥ m/8`, starting from the all-zero member `κh^β`.
pub fn build_hypothesis_family(
    beta: f64,
    radius: f64,
    c0: f64,
    kappa: f64,
    n_total: usize,
    count: usize,
    seed: u64,
) -> Result<HypothesisFamily> {
    if !(beta >= 1.0) || !(radius > 0.0) || !(c0 > 0.0) || !kappa.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "family needs beta ≥ 1, R > 0, c0 > 0 (got {beta}, {radius}, {c0})"
        )));
    }
    if count == 0 || n_total == 0 {
        return Err(Error::InvalidArgument("family needs count ≥ 1 and N ≥ 1".into()));
    }
    let m = bump_count(beta, c0, n_total);
    let h = 1.0 / m as f64;
    let base = kappa * h.powf(beta);
    let mut kept: Vec<Vec<bool>> = vec![vec![false; m]];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = DRAWS_PER_MEMBER * count;
    let mut draws = 0;
    while kept.len() < count {
        if draws == budget {
            return Err(Error::SelectionBudget {
                kept: kept.len(),
                wanted: count,
                attempts: draws,
            });
        }
        draws += 1;
        let w: Vec<bool> = (0..m).map(|_| rng.gen_bool(0.5)).collect();
        if kept.iter().all(|k| 8 * hamming(k, &w) >= m) {
            kept.push(w);
        }
    }
    Ok(HypothesisFamily {
        beta,
        radius,
        c0,
        kappa,
        n_total,
        m,
        h,
        members: kept
            .into_iter()
            .map(|w| member(base, h, beta, radius, w))
            .collect(),
    })
}

impl HypothesisFamily {
    pub fn weights(&self, j: usize) -> &[bool] {
        match &self.members[j] {
            CoefficientFn::BumpSum { weights, .. } => weights,
            _ => unreachable!("family members are bump sums"),
        }
    }

    /// `κh^β`, the value of every member outside the bumps.
    pub fn base(&self) -> f64 {
        self.kappa * self.h.powf(self.beta)
    }

    /// `8R²h^{2β+1}‖K‖²·ρ` for Hamming distance `ρ`.
    pub fn separation(&self, rho: usize, kernel_sq_norm: f64) -> f64 {
        8.0 * self.radius.powi(2) * self.h.powf(2.0 * self.beta + 1.0) * kernel_sq_norm * rho as f64
    }
}

/// Composite Simpson rule for `∫_a^b f` with `intervals` (rounded up to even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
    let n = (intervals.max(2) + 1) & !1;
    let step = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * step);
    }
    acc * step / 3.0
}

/// `‖K‖² = ∫ K(u)² du` over the support `(−1/2, 1/2)`.
pub fn kernel_sq_norm(intervals: usize) -> f64 {
    simpson(|u| bump_kernel(u).powi(2), -0.5, 0.5, intervals)
}

/// `∫_{−1}^{1} (f − g)²` by the same rule.
pub fn sq_distance(f: &CoefficientFn, g: &CoefficientFn, intervals: usize) -> f64 {
    simpson(|x| (f.eval(x) - g.eval(x)).powi(2), -1.0, 1.0, intervals)
}
