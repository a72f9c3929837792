//! Projection estimators of the drift and squared diffusion coefficient.
//!
//! Drifts are regressed on the difference quotients `Z`, the squared
//! diffusion on `U`, both over the spline space of a [`SplineSpec`] with
//! coefficients restricted to the ball `‖a‖² ≤ (K + M)·A²·log N`.
//! Evaluations are truncated to slowly growing windows.

mod constant;
mod schedule;
mod solver;

pub use constant::{
    constant_estimators, path_statistic, truncate_variance, ConstantModelEstimate, ConstantStats,
};
pub use schedule::{diffusion_schedule, log_level, schedule, Regime, ScheduleParams};
pub use solver::{constrained_ls, solve_normal_equations, ConstrainedSolution, NormalEquations};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Label;
use crate::simulate::Dataset;
use crate::spline::{make_spec, SplineSpec};

/// A spline together with the constrained solution that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplineFit {
    pub spec: SplineSpec,
    pub coeffs: Vec<f64>,
    pub constraint_radius_sq: f64,
    pub lagrange_multiplier: f64,
    pub constraint_active: bool,
}

impl SplineFit {
    pub fn new(spec: SplineSpec, solution: ConstrainedSolution) -> Self {
        SplineFit {
            spec,
            coeffs: solution.coeffs,
            constraint_radius_sq: solution.radius_sq,
            lagrange_multiplier: solution.multiplier,
            constraint_active: solution.active,
        }
    }

    /// Untruncated spline value.
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.spec.eval_combination(&self.coeffs, x)
    }
}

/// Truncated drift estimate `b̃_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftEstimate {
    /// `None` on the degenerate event `N_i ≤ 1`.
    pub fit: Option<SplineFit>,
    pub truncation_level: f64,
    pub class_label: Label,
}

impl DriftEstimate {
    pub fn degenerate(&self) -> bool {
        self.fit.is_none()
    }

    /// Spline value before truncation (0 when degenerate).
    pub fn eval_raw(&self, x: f64) -> f64 {
        self.fit.as_ref().map_or(0.0, |f| f.eval(x))
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        eval_drift(self, x)
    }
}

/// `clamp(b̂(x), −log N, log N)`; zero for a degenerate estimate.
pub fn eval_drift(est: &DriftEstimate, x: f64) -> f64 {
    let level = est.truncation_level;
    est.eval_raw(x).clamp(-level, level)
}

/// Truncated estimate `σ̃²` of the squared diffusion coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffusionEstimate {
    pub fit: SplineFit,
    pub lower_clamp: f64,
    pub upper_clamp: f64,
}

impl DiffusionEstimate {
    pub fn eval_raw(&self, x: f64) -> f64 {
        self.fit.eval(x)
    }

    /// `σ̂²(x)` clamped to `[1/log N, log N]`.
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.eval_raw(x).clamp(self.lower_clamp, self.upper_clamp)
    }
}

/// Accumulates normal equations of `(X_{kΔ}, response_k)` over the selected paths.
fn accumulate<F>(
    spec: &SplineSpec,
    dataset: &Dataset,
    class_filter: Option<Label>,
    response: F,
) -> NormalEquations
where
    F: Fn(f64, f64, f64) -> f64,
{
    let mut eqs = NormalEquations::zeros(spec.dim());
    let scale = dataset.n() as f64;
    for path in dataset.select(class_filter) {
        for w in path.values.windows(2) {
            eqs.add_point(spec, w[0], response(w[0], w[1], scale));
        }
    }
    eqs
}

/// Fits `b̃_i` with the given schedule; degenerate when `N_i ≤ 1`.
pub fn fit_drift(
    dataset: &Dataset,
    class_label: Label,
    params: &ScheduleParams,
    degree: usize,
    n_total: usize,
) -> Result<DriftEstimate> {
    let truncation_level = log_level(n_total);
    if dataset.class_count(class_label) <= 1 {
        return Ok(DriftEstimate {
            fit: None,
            truncation_level,
            class_label,
        });
    }
    let spec = make_spec(params.half_width, params.resolution, degree)?;
    let eqs = accumulate(&spec, dataset, Some(class_label), |a, b, n| (b - a) * n);
    let radius_sq = spec.dim() as f64 * params.half_width.powi(2) * (n_total as f64).ln();
    let solution = solve_normal_equations(&eqs, radius_sq)?;
    Ok(DriftEstimate {
        fit: Some(SplineFit::new(spec, solution)),
        truncation_level,
        class_label,
    })
}

/// Computes the class schedule from the data and fits `b̃_i`.
pub fn fit_drift_scheduled(
    dataset: &Dataset,
    class_label: Label,
    beta: f64,
    regime: Regime,
    k_scale: f64,
    degree: usize,
) -> Result<(DriftEstimate, Option<ScheduleParams>)> {
    let n_class = dataset.class_count(class_label);
    let n_total = dataset.len();
    if n_class <= 1 {
        let est = DriftEstimate {
            fit: None,
            truncation_level: log_level(n_total),
            class_label,
        };
        return Ok((est, None));
    }
    let params = schedule(n_class, beta, regime, k_scale)?;
    Ok((fit_drift(dataset, class_label, &params, degree, n_total)?, Some(params)))
}

/// Fits `σ̃²` on all paths regardless of label.
pub fn fit_diffusion(
    dataset: &Dataset,
    half_width: f64,
    resolution: usize,
    degree: usize,
    n_total: usize,
) -> Result<DiffusionEstimate> {
    if n_total < 1 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let spec = make_spec(half_width, resolution, degree)?;
    let eqs = accumulate(&spec, dataset, None, |a, b, n| (b - a) * (b - a) * n);
    let level = log_level(n_total);
    let radius_sq = spec.dim() as f64 * half_width * half_width * level;
    let solution = solve_normal_equations(&eqs, radius_sq)?;
    Ok(DiffusionEstimate {
        fit: SplineFit::new(spec, solution),
        lower_clamp: 1.0 / level,
        upper_clamp: level,
    })
}

/// Class frequencies `(N0/N, N1/N)`.
pub fn estimate_p(dataset: &Dataset) -> (f64, f64) {
    let total = dataset.len() as f64;
    (
        dataset.class_count(0) as f64 / total,
        dataset.class_count(1) as f64 / total,
    )
}
