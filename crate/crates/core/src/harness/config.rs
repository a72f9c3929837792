use serde::{Deserialize, Serialize};
use std::path::Path as FsPath;

use crate::error::{Error, Result};
use crate::estimate::Regime;
use crate::model::MixtureModel;

/// How the number of observation steps per path follows `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NRule {
    #[serde(rename = "equal_N")]
    EqualN,
    #[serde(rename = "fixed")]
    Fixed(usize),
}

impl NRule {
    pub fn steps(self, n_total: usize) -> usize {
        match self {
            NRule::EqualN => n_total,
            NRule::Fixed(n) => n,
        }
    }
}

/// Parameters of the lower-bound hypothesis family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FamilyConfig {
    #[serde(rename = "R")]
    pub radius: f64,
    pub c0: f64,
    pub kappa: f64,
    pub count: usize,
    /// Sample size fixing `m = ⌈c0·N^{1/(2β+1)}⌉`; defaults to the largest grid value.
    #[serde(rename = "N")]
    pub sample_size: Option<usize>,
}

impl Default for FamilyConfig {
    fn default() -> Self {
        FamilyConfig {
            radius: 1.0,
            c0: 1.0,
            kappa: 1.0,
            count: 8,
            sample_size: None,
        }
    }
}

fn one() -> f64 {
    1.0
}

fn default_degree() -> usize {
    3
}

fn default_substeps() -> usize {
    1
}

fn default_output() -> String {
    "results".into()
}

/// JSON experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub model: MixtureModel,
    pub beta: f64,
    pub regime: Regime,
    #[serde(rename = "N_grid")]
    pub n_grid: Vec<usize>,
    pub n_rule: NRule,
    pub replicates: usize,
    pub test_size: usize,
    pub seed: u64,
    #[serde(rename = "K_scale", default = "one")]
    pub k_scale: f64,
    /// Multiplier on the diffusion-estimator resolution `K̃ = N^{1/(2β+1)}`.
    #[serde(default = "one")]
    pub diffusion_k_scale: f64,
    #[serde(rename = "M", default = "default_degree")]
    pub degree: usize,
    #[serde(default = "default_output")]
    pub output_path: String,
    #[serde(default = "default_substeps")]
    pub substeps: usize,
    /// Constant `c` of the Gram check `1/λ_min ≤ c·N_i/log²(N_i)`.
    #[serde(default = "one")]
    pub gram_c: f64,
    #[serde(default)]
    pub family: FamilyConfig,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &FsPath) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        self.model
            .validate()
            .map_err(|e| Error::Config(format!("model: {e}")))?;
        if self.n_grid.is_empty() {
            return fail("N_grid is empty".into());
        }
        if self.n_grid.iter().any(|&n| n < 4) {
            return fail("every N in N_grid must be at least 4".into());
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return fail("N_grid must be strictly increasing".into());
        }
        if let NRule::Fixed(0) = self.n_rule {
            return fail("fixed n must be at least 1".into());
        }
        if self.replicates < 1 || self.test_size < 1 {
            return fail("replicates and test_size must be at least 1".into());
        }
        if !(self.beta >= 1.0) {
            return fail(format!("beta must be ≥ 1, got {}", self.beta));
        }
        if !(self.k_scale > 0.0) || !(self.diffusion_k_scale > 0.0) {
            return fail("K scales must be positive".into());
        }
        if !(1..16).contains(&self.degree) {
            return fail(format!("M must lie in 1..=15, got {}", self.degree));
        }
        if self.substeps < 1 {
            return fail("substeps must be at least 1".into());
        }
        match self.regime {
            Regime::Constant if !self.model.is_constant() => {
                return fail("constant regime requires constant coefficient functions".into())
            }
            Regime::Bounded if self.model.has_unbounded_drift() => {
                return fail(
                    "unbounded drifts need the unbounded_drift regime (known diffusion)".into(),
                )
            }
            _ => {}
        }
        let f = &self.family;
        if !(f.radius > 0.0) || !(f.c0 > 0.0) || f.count < 1 || !f.kappa.is_finite() {
            return fail("family needs R > 0, c0 > 0, finite kappa and count ≥ 1".into());
        }
        Ok(())
    }

    /// Steps per path for sample size `n_total`.
    pub fn steps(&self, n_total: usize) -> usize {
        self.n_rule.steps(n_total)
    }
}
