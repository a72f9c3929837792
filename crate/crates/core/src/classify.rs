//! Plug-in and Bayes classifiers built on discretised Girsanov statistics.
//!
//! For a drift `b` and squared diffusion `s` the log-likelihood statistic of
//! a path observed at step `Δ` is
//!
//! ```text
//! F = Σ_k (b/s)(X_k)(X_{k+1} − X_k) − (Δ/2) Σ_k (b²/s)(X_k)
//! ```
//!
//! and the posterior probability of label 1 is the softmax
//! `p1·e^{F1} / (p0·e^{F0} + p1·e^{F1})`. The Bayes classifier uses the same
//! sums with the true coefficients, so both rules see identical information.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::{ConstantModelEstimate, DiffusionEstimate, DriftEstimate};
use crate::model::{CoefficientFn, Label, MixtureModel};
use crate::par;
use crate::simulate::{Dataset, Path};

/// Drift used inside a classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DriftFn {
    Spline { estimate: DriftEstimate },
    Exact { function: CoefficientFn },
}

impl DriftFn {
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            DriftFn::Spline { estimate } => estimate.eval(x),
            DriftFn::Exact { function } => function.eval(x),
        }
    }
}

/// Squared diffusion coefficient used inside a classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SigmaSqFn {
    Spline { estimate: DiffusionEstimate },
    Constant { value: f64 },
    /// `x ↦ σ(x)²` for a known `σ`.
    SquareOf { sigma: CoefficientFn },
}

impl SigmaSqFn {
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            SigmaSqFn::Spline { estimate } => estimate.eval(x),
            SigmaSqFn::Constant { value } => *value,
            SigmaSqFn::SquareOf { sigma } => {
                let s = sigma.eval(x);
                s * s
            }
        }
    }
}

/// `g_{b0, b1, σ², p}`: label 1 iff the posterior of class 1 is at least 1/2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatedClassifier {
    pub b0: DriftFn,
    pub b1: DriftFn,
    pub sigma_sq: SigmaSqFn,
    pub p_hat: (f64, f64),
}

impl EstimatedClassifier {
    /// Plug-in from fitted spline drifts and diffusion.
    pub fn from_splines(
        b0: DriftEstimate,
        b1: DriftEstimate,
        sigma_sq: DiffusionEstimate,
        p_hat: (f64, f64),
    ) -> Self {
        EstimatedClassifier {
            b0: DriftFn::Spline { estimate: b0 },
            b1: DriftFn::Spline { estimate: b1 },
            sigma_sq: SigmaSqFn::Spline { estimate: sigma_sq },
            p_hat,
        }
    }

    /// Plug-in for the constant-coefficient model.
    pub fn from_constant(est: &ConstantModelEstimate) -> Self {
        EstimatedClassifier {
            b0: DriftFn::Exact {
                function: CoefficientFn::constant(est.mu0_hat),
            },
            b1: DriftFn::Exact {
                function: CoefficientFn::constant(est.mu1_hat),
            },
            sigma_sq: SigmaSqFn::Constant {
                value: est.alpha_sq_tilde,
            },
            p_hat: est.p_hat,
        }
    }

    /// Classifier built from the true parameters of `model`.
    pub fn from_model(model: &MixtureModel) -> Self {
        EstimatedClassifier {
            b0: DriftFn::Exact {
                function: model.b0.clone(),
            },
            b1: DriftFn::Exact {
                function: model.b1.clone(),
            },
            sigma_sq: SigmaSqFn::SquareOf {
                sigma: model.sigma.clone(),
            },
            p_hat: (model.p0, model.p1),
        }
    }

    /// `(F̂0, F̂1)` for `path` in one sweep.
    pub fn statistics(&self, path: &Path) -> Result<(f64, f64)> {
        let dt = path.delta();
        let mut linear = [0.0f64; 2];
        let mut quadratic = [0.0f64; 2];
        for w in path.values.windows(2) {
            let x = w[0];
            let s = checked_sigma_sq(&self.sigma_sq, x)?;
            let dx = w[1] - x;
            for (c, drift) in [&self.b0, &self.b1].into_iter().enumerate() {
                let b = drift.eval(x);
                let ratio = b / s;
                linear[c] += ratio * dx;
                quadratic[c] += ratio * b;
            }
        }
        Ok((
            linear[0] - 0.5 * dt * quadratic[0],
            linear[1] - 0.5 * dt * quadratic[1],
        ))
    }

    /// Posterior probability of label 1.
    pub fn posterior(&self, path: &Path) -> Result<f64> {
        let (f0, f1) = self.statistics(path)?;
        softmax_phi(f0, f1, self.p_hat)
    }
}

#[inline]
fn checked_sigma_sq(sigma_sq: &SigmaSqFn, x: f64) -> Result<f64> {
    let s = sigma_sq.eval(x);
    if s > 0.0 && s.is_finite() {
        Ok(s)
    } else {
        Err(Error::NonPositiveDiffusion { x, value: s })
    }
}

/// `Σ (b/s)(X_k)(X_{k+1} − X_k) − (Δ/2) Σ (b²/s)(X_k)` with `Δ = 1/n`.
pub fn girsanov_stat<B, S>(path: &Path, drift: B, sigma_sq: S) -> Result<f64>
where
    B: Fn(f64) -> f64,
    S: Fn(f64) -> f64,
{
    let dt = path.delta();
    let mut linear = 0.0;
    let mut quadratic = 0.0;
    for w in path.values.windows(2) {
        let x = w[0];
        let s = sigma_sq(x);
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::NonPositiveDiffusion { x, value: s });
        }
        let b = drift(x);
        linear += b / s * (w[1] - x);
        quadratic += b * b / s;
    }
    Ok(linear - 0.5 * dt * quadratic)
}

/// `p1·e^{F1} / (p0·e^{F0} + p1·e^{F1})`, evaluated in log space.
pub fn softmax_phi(f0: f64, f1: f64, p: (f64, f64)) -> Result<f64> {
    let (p0, p1) = p;
    if !(p0 >= 0.0 && p1 >= 0.0) || p0 + p1 <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "prior weights must be non-negative and not both zero, got ({p0}, {p1})"
        )));
    }
    if p0 == 0.0 {
        return Ok(1.0);
    }
    if p1 == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / (1.0 + (p0.ln() - p1.ln() + f0 - f1).exp()))
}

/// Anything that assigns a label to a path.
pub trait PathClassifier: Sync {
    fn classify(&self, path: &Path) -> Result<Label>;
}

impl<F> PathClassifier for F
where
    F: Fn(&Path) -> Label + Sync,
{
    fn classify(&self, path: &Path) -> Result<Label> {
        Ok(self(path))
    }
}

impl PathClassifier for EstimatedClassifier {
    fn classify(&self, path: &Path) -> Result<Label> {
        classify_plugin(path, self)
    }
}

/// `ĝ(X) = 1{Φ̂(X) ≥ 1/2}`.
pub fn classify_plugin(path: &Path, clf: &EstimatedClassifier) -> Result<Label> {
    Ok(Label::from(clf.posterior(path)? >= 0.5))
}

/// The Bayes rule `g*` of a mixture model, discretised at the path's resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct BayesClassifier {
    pub model: MixtureModel,
    rule: EstimatedClassifier,
}

impl BayesClassifier {
    pub fn new(model: MixtureModel) -> Result<Self> {
        model.validate()?;
        let rule = EstimatedClassifier::from_model(&model);
        Ok(BayesClassifier { model, rule })
    }

    pub fn rule(&self) -> &EstimatedClassifier {
        &self.rule
    }
}

impl PathClassifier for BayesClassifier {
    fn classify(&self, path: &Path) -> Result<Label> {
        classify_bayes(path, self)
    }
}

pub fn classify_bayes(path: &Path, bc: &BayesClassifier) -> Result<Label> {
    classify_plugin(path, &bc.rule)
}

fn true_label(path: &Path) -> Result<Label> {
    path.label
        .ok_or_else(|| Error::InvalidArgument("test path has no label".into()))
}

/// Fraction of misclassified test paths.
pub fn empirical_risk<C: PathClassifier + ?Sized>(classifier: &C, test: &Dataset) -> Result<f64> {
    let errors = par::try_map_indexed(test.len(), |j| {
        let path = &test.paths[j];
        Ok::<_, Error>(usize::from(classifier.classify(path)? != true_label(path)?))
    })?;
    Ok(errors.iter().sum::<usize>() as f64 / test.len() as f64)
}

/// Error and disagreement counts of two classifiers on one test set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RiskTally {
    pub plugin_errors: usize,
    pub bayes_errors: usize,
    pub disagreements: usize,
    pub total: usize,
}

impl RiskTally {
    pub fn record(&mut self, truth: Label, plugin: Label, bayes: Label) {
        self.plugin_errors += usize::from(plugin != truth);
        self.bayes_errors += usize::from(bayes != truth);
        self.disagreements += usize::from(plugin != bayes);
        self.total += 1;
    }

    pub fn merge(&mut self, other: &RiskTally) {
        self.plugin_errors += other.plugin_errors;
        self.bayes_errors += other.bayes_errors;
        self.disagreements += other.disagreements;
        self.total += other.total;
    }

    pub fn plugin_risk(&self) -> f64 {
        self.plugin_errors as f64 / self.total as f64
    }

    pub fn bayes_risk(&self) -> f64 {
        self.bayes_errors as f64 / self.total as f64
    }

    pub fn disagreement_rate(&self) -> f64 {
        self.disagreements as f64 / self.total as f64
    }

    /// `R(ĝ) − R(g*)` on the shared test set; may be slightly negative.
    pub fn excess_risk(&self) -> f64 {
        (self.plugin_errors as f64 - self.bayes_errors as f64) / self.total as f64
    }
}

/// Classifies one labelled path with both rules.
pub fn tally_path<P, B>(tally: &mut RiskTally, path: &Path, plugin: &P, bayes: &B) -> Result<()>
where
    P: PathClassifier + ?Sized,
    B: PathClassifier + ?Sized,
{
    let truth = true_label(path)?;
    tally.record(truth, plugin.classify(path)?, bayes.classify(path)?);
    Ok(())
}

pub fn compare_on<P, B>(plugin: &P, bayes: &B, test: &Dataset) -> Result<RiskTally>
where
    P: PathClassifier + ?Sized,
    B: PathClassifier + ?Sized,
{
    let tallies = par::try_map_indexed(test.len(), |j| {
        let mut t = RiskTally::default();
        tally_path(&mut t, &test.paths[j], plugin, bayes)?;
        Ok::<_, Error>(t)
    })?;
    let mut total = RiskTally::default();
    tallies.iter().for_each(|t| total.merge(t));
    Ok(total)
}

/// Shared-test-set estimate of `R(ĝ) − R(g*)`.
pub fn excess_risk(
    plugin: &EstimatedClassifier,
    bayes: &BayesClassifier,
    test: &Dataset,
) -> Result<f64> {
    Ok(compare_on(plugin, bayes, test)?.excess_risk())
}

/// `√( (1/(N·n)) Σ_j Σ_{k<n} (f − g)²(X^j_{kΔ}) )` over the selected paths.
pub fn empirical_norm<F, G>(
    f: F,
    g: G,
    dataset: &Dataset,
    class_filter: Option<Label>,
) -> Result<f64>
where
    F: Fn(f64) -> f64 + Sync,
    G: Fn(f64) -> f64 + Sync,
{
    let selected: Vec<&Path> = dataset.select(class_filter).collect();
    if selected.is_empty() {
        return Err(Error::EmptySelection(format!(
            "no paths with label {class_filter:?}"
        )));
    }
    let per_path = par::map_indexed(selected.len(), |j| {
        let sq: Vec<f64> = selected[j]
            .sample_points()
            .iter()
            .map(|&x| {
                let d = f(x) - g(x);
                d * d
            })
            .collect();
        par::pairwise_sum(&sq)
    });
    let points = selected.len() * dataset.n();
    Ok((par::pairwise_sum(&per_path) / points as f64).sqrt())
}
