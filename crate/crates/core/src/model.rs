//! Coefficient functions and the two-class mixture model.
//!
//! The class label `Y ∈ {0, 1}` selects the drift; the diffusion coefficient
//! is shared:
//!
//! ```text
//! dX_t = b_Y(X_t) dt + σ(X_t) dW_t,   X_0 = x0,   t ∈ [0, 1]
//! ```

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::E;

use crate::error::{Error, Result};

/// Class label, always 0 or 1.
pub type Label = u8;

/// Grid used to check that the diffusion coefficient stays away from zero.
const SIGMA_CHECK_RANGE: f64 = 10.0;
const SIGMA_CHECK_POINTS: usize = 10_001;

/// Closed family of scalar coefficient functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoefficientFn {
    Constant {
        value: f64,
    },
    /// `x ↦ 1 / (1 + x²)`
    RationalBump,
    /// `x ↦ x·exp(−x²)`
    GaussianBump,
    /// `x ↦ √(2/3) + ((√6 − 2) / (2√6))·(1 + cos x)`, valued in `[√(2/3), 1]`.
    CosineSigma,
    /// `x ↦ slope·x + intercept`. The OU drift `−(x − μ)` is `Affine { slope: -1, intercept: μ }`.
    Affine {
        slope: f64,
        intercept: f64,
    },
    /// `x ↦ base + Σ_k w_k · 2R·h^β·K(((x+1)/2 − x_k)/h)` with `x_k = (k − 1/2)·h`.
    ///
    /// Every bump lives inside `(−1, 1)`, so the function equals `base`
    /// outside that interval.
    BumpSum {
        base: f64,
        h: f64,
        beta: f64,
        radius: f64,
        weights: Vec<bool>,
    },
}

/// Smooth bump kernel supported on `(−1/2, 1/2)` with `sup K = K(0) = 1/2`.
pub fn bump_kernel(u: f64) -> f64 {
    let s = 1.0 - 4.0 * u * u;
    if s <= 0.0 {
        0.0
    } else {
        0.5 * E * (-1.0 / s).exp()
    }
}

impl CoefficientFn {
    pub fn constant(value: f64) -> Self {
        CoefficientFn::Constant { value }
    }

    /// Ornstein–Uhlenbeck drift `x ↦ −(x − mean)`.
    pub fn ou(mean: f64) -> Self {
        CoefficientFn::Affine {
            slope: -1.0,
            intercept: mean,
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            CoefficientFn::Constant { value } => *value,
            CoefficientFn::RationalBump => 1.0 / (1.0 + x * x),
            CoefficientFn::GaussianBump => x * (-x * x).exp(),
            CoefficientFn::CosineSigma => {
                let s6 = 6f64.sqrt();
                (2.0f64 / 3.0).sqrt() + (s6 - 2.0) / (2.0 * s6) * (1.0 + x.cos())
            }
            CoefficientFn::Affine { slope, intercept } => slope * x + intercept,
            CoefficientFn::BumpSum {
                base,
                h,
                beta,
                radius,
                weights,
            } => base + bump_sum_term(x, *h, *beta, *radius, weights),
        }
    }

    /// Declared bound on `sup |f|`, or `None` for unbounded variants.
    pub fn sup_bound(&self) -> Option<f64> {
        match self {
            CoefficientFn::Constant { value } => Some(value.abs()),
            CoefficientFn::RationalBump => Some(1.0),
            CoefficientFn::GaussianBump => Some((-0.5f64).exp() / 2f64.sqrt()),
            CoefficientFn::CosineSigma => Some(1.0),
            CoefficientFn::Affine { slope, intercept } => {
                if *slope == 0.0 {
                    Some(intercept.abs())
                } else {
                    None
                }
            }
            CoefficientFn::BumpSum {
                base,
                h,
                beta,
                radius,
                weights,
            } => {
                let bump = if weights.iter().any(|&w| w) {
                    radius * h.powf(*beta)
                } else {
                    0.0
                };
                Some(base.abs() + bump)
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, CoefficientFn::Constant { .. })
    }

    pub fn constant_value(&self) -> Option<f64> {
        match self {
            CoefficientFn::Constant { value } => Some(*value),
            _ => None,
        }
    }
}

fn bump_sum_term(x: f64, h: f64, beta: f64, radius: f64, weights: &[bool]) -> f64 {
    if !(-1.0..1.0).contains(&x) || weights.is_empty() {
        return 0.0;
    }
    // Only the bump whose cell contains (x+1)/2 can be nonzero.
    let y = 0.5 * (x + 1.0);
    let cell = (y / h).floor();
    if cell < 0.0 {
        return 0.0;
    }
    let k = cell as usize;
    if k >= weights.len() || !weights[k] {
        return 0.0;
    }
    let centre = (k as f64 + 0.5) * h;
    2.0 * radius * h.powf(beta) * bump_kernel((y - centre) / h)
}

/// Data-generating process: two drifts, a shared diffusion coefficient and
/// the class prior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureModel {
    pub b0: CoefficientFn,
    pub b1: CoefficientFn,
    pub sigma: CoefficientFn,
    pub p0: f64,
    pub p1: f64,
    #[serde(default)]
    pub x0: f64,
}

impl MixtureModel {
    pub fn new(
        b0: CoefficientFn,
        b1: CoefficientFn,
        sigma: CoefficientFn,
        p0: f64,
        p1: f64,
        x0: f64,
    ) -> Result<Self> {
        let model = MixtureModel {
            b0,
            b1,
            sigma,
            p0,
            p1,
            x0,
        };
        model.validate()?;
        Ok(model)
    }

    /// Balanced model `dX = μ_Y dt + α dW` with constant coefficients.
    pub fn constant(mu0: f64, mu1: f64, alpha: f64, p0: f64) -> Result<Self> {
        Self::new(
            CoefficientFn::constant(mu0),
            CoefficientFn::constant(mu1),
            CoefficientFn::constant(alpha),
            p0,
            1.0 - p0,
            0.0,
        )
    }

    /// `b0 = 1/(1+x²)`, `b1 = x·exp(−x²)`, `σ = CosineSigma`, balanced prior.
    pub fn bump_example() -> Self {
        MixtureModel {
            b0: CoefficientFn::RationalBump,
            b1: CoefficientFn::GaussianBump,
            sigma: CoefficientFn::CosineSigma,
            p0: 0.5,
            p1: 0.5,
            x0: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let prob_ok = |p: f64| p > 0.0 && p < 1.0;
        if !prob_ok(self.p0) || !prob_ok(self.p1) {
            return Err(Error::Config(format!(
                "class probabilities must lie in (0,1), got ({}, {})",
                self.p0, self.p1
            )));
        }
        if (self.p0 + self.p1 - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "class probabilities must sum to 1, got {}",
                self.p0 + self.p1
            )));
        }
        if !self.x0.is_finite() {
            return Err(Error::Config("x0 must be finite".into()));
        }
        let floor = self.sigma_floor();
        if !(floor > 0.0) {
            return Err(Error::Config(format!(
                "diffusion coefficient must be uniformly positive, minimum on grid is {floor}"
            )));
        }
        Ok(())
    }

    /// Minimum of `σ` over a dense grid on `[−10, 10]`.
    pub fn sigma_floor(&self) -> f64 {
        let step = 2.0 * SIGMA_CHECK_RANGE / (SIGMA_CHECK_POINTS - 1) as f64;
        (0..SIGMA_CHECK_POINTS)
            .map(|i| self.sigma.eval(-SIGMA_CHECK_RANGE + i as f64 * step))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn drift(&self, label: Label) -> &CoefficientFn {
        if label == 0 {
            &self.b0
        } else {
            &self.b1
        }
    }

    /// True when a drift is affine with nonzero slope; such models are
    /// only supported with a known diffusion coefficient.
    pub fn has_unbounded_drift(&self) -> bool {
        self.b0.sup_bound().is_none() || self.b1.sup_bound().is_none()
    }

    pub fn is_constant(&self) -> bool {
        self.b0.is_constant() && self.b1.is_constant() && self.sigma.is_constant()
    }
}

/// Draws a label: 0 with probability `p0`, 1 otherwise.
pub fn sample_label<R: Rng + ?Sized>(p0: f64, rng: &mut R) -> Result<Label> {
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "p0 must lie in (0,1), got {p0}"
        )));
    }
    let u: f64 = rng.gen();
    Ok(if u < p0 { 0 } else { 1 })
}
