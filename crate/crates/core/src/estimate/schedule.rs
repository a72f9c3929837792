use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Modelling regime of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Bounded drifts, unknown diffusion coefficient.
    Bounded,
    /// Unbounded (e.g. OU) drifts with known diffusion coefficient.
    UnboundedDrift,
    /// Constant coefficients, closed-form estimators.
    Constant,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Bounded => "bounded",
            Regime::UnboundedDrift => "unbounded_drift",
            Regime::Constant => "constant",
        }
    }
}

/// Natural log of a sample size, floored at 1 so truncation windows never
/// collapse for `N ≤ 2`.
pub fn log_level(n: usize) -> f64 {
    (n as f64).ln().max(1.0)
}

/// Half-width and resolution of the drift spline space for one class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleParams {
    pub beta: f64,
    pub regime: Regime,
    pub half_width: f64,
    pub resolution: usize,
    pub k_scale: f64,
}

/// Drift schedule for a class of size `n_class`:
/// `A = √(c·log N_i)` with `c = 2β/(2β+1)` (bounded) or `6β/(2β+1)`
/// (unbounded drift), and `K = max(1, round(k_scale·N_i^{1/(2β+1)}·log(N_i)^{−5/2}))`.
pub fn schedule(n_class: usize, beta: f64, regime: Regime, k_scale: f64) -> Result<ScheduleParams> {
    if n_class < 2 {
        return Err(Error::InvalidArgument(format!(
            "schedule needs at least 2 paths, got {n_class}"
        )));
    }
    if !(beta >= 1.0) {
        return Err(Error::InvalidArgument(format!("beta must be ≥ 1, got {beta}")));
    }
    if !(k_scale > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "K scale must be positive, got {k_scale}"
        )));
    }
    let log_n = (n_class as f64).ln();
    let exponent = 1.0 / (2.0 * beta + 1.0);
    let factor = match regime {
        Regime::Bounded => 2.0 * beta * exponent,
        Regime::UnboundedDrift => 6.0 * beta * exponent,
        Regime::Constant => {
            return Err(Error::InvalidArgument(
                "the constant regime has no spline schedule".into(),
            ))
        }
    };
    let half_width = (factor * log_n).sqrt();
    let raw_k = k_scale * (n_class as f64).powf(exponent) * log_n.powf(-2.5);
    Ok(ScheduleParams {
        beta,
        regime,
        half_width,
        resolution: (raw_k.round() as usize).max(1),
        k_scale,
    })
}

/// Diffusion schedule `(Ã, K̃) = (log N, max(1, round(k_scale·N^{1/(2β+1)})))`.
pub fn diffusion_schedule(n_total: usize, beta: f64, k_scale: f64) -> Result<(f64, usize)> {
    if n_total < 1 || !(beta >= 1.0) || !(k_scale > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "invalid diffusion schedule input (N = {n_total}, beta = {beta}, scale = {k_scale})"
        )));
    }
    let raw = k_scale * (n_total as f64).powf(1.0 / (2.0 * beta + 1.0));
    Ok((log_level(n_total), (raw.round() as usize).max(1)))
}
