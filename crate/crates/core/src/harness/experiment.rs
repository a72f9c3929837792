//! Monte-Carlo experiments over a grid of sample sizes.
//!
//! Cells `(N, replicate)` run on the work pool. Each cell draws its train
//! and test paths from its own derived seeds and results are collected in
//! cell order, so tables do not depend on the number of workers.

use serde::Serialize;

use super::config::ExperimentConfig;
use super::family::{build_hypothesis_family, HypothesisFamily};
use super::report::{fmt_f64, fmt_opt_f64, fmt_opt_usize, Table};
use super::seeds::{stream_seed, Stream};
use super::slope::{mean_std, RateFit, RatePoint};
use crate::classify::{tally_path, BayesClassifier, DriftFn, EstimatedClassifier, RiskTally, SigmaSqFn};
use crate::error::{Error, Result};
use crate::estimate::{
    constant_estimators, diffusion_schedule, estimate_p, fit_diffusion, fit_drift_scheduled,
    path_statistic, schedule, ConstantStats, Regime,
};
use crate::model::{CoefficientFn, Label, MixtureModel};
use crate::par;
use crate::simulate::{Dataset, Path, PathGenerator};
use crate::spline::{empirical_gram, make_spec, min_eigenvalue};

/// Spline dimensions used by a fitted pipeline; `None` where not applicable.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct FitShape {
    pub drift_k: [Option<usize>; 2],
    pub drift_a: [Option<f64>; 2],
    pub diffusion_k: Option<usize>,
    pub diffusion_a: Option<f64>,
}

impl FitShape {
    const HEADER: [&'static str; 6] = ["K0", "A0", "K1", "A1", "K_sigma", "A_sigma"];

    fn cells(&self) -> Vec<String> {
        vec![
            fmt_opt_usize(self.drift_k[0]),
            fmt_opt_f64(self.drift_a[0]),
            fmt_opt_usize(self.drift_k[1]),
            fmt_opt_f64(self.drift_a[1]),
            fmt_opt_usize(self.diffusion_k),
            fmt_opt_f64(self.diffusion_a),
        ]
    }
}

/// A plug-in classifier with the bookkeeping of how it was fitted.
#[derive(Debug, Clone)]
pub struct PlugIn {
    pub classifier: EstimatedClassifier,
    pub shape: FitShape,
    pub class_counts: (usize, usize),
}

/// Where a cell sits in the experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CellId {
    #[serde(rename = "N")]
    pub n_total: usize,
    pub n: usize,
    pub replicate: usize,
    pub member: usize,
}

fn grid_cells(cfg: &ExperimentConfig, members: usize) -> Vec<CellId> {
    let mut cells = Vec::new();
    for &n_total in &cfg.n_grid {
        for replicate in 0..cfg.replicates {
            for member in 0..members {
                cells.push(CellId {
                    n_total,
                    n: cfg.steps(n_total),
                    replicate,
                    member,
                });
            }
        }
    }
    cells
}

fn run_cells<T, F>(cells: &[CellId], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(CellId) -> Result<T> + Sync + Send,
{
    par::try_map_indexed(cells.len(), |i| {
        let cell = cells[i];
        f(cell).map_err(|e| Error::Replicate {
            n_total: cell.n_total,
            replicate: cell.replicate,
            source: Box::new(e),
        })
    })
}

fn generator<'a>(
    cfg: &ExperimentConfig,
    model: &'a MixtureModel,
    cell: CellId,
    stream: Stream,
) -> PathGenerator<'a> {
    let seed = stream_seed(cfg.seed, stream, cell.n_total, cell.replicate, cell.member);
    PathGenerator::new(model, cell.n, seed).with_substeps(cfg.substeps)
}

/// Applies `f` to paths `0..count` of `gen` without keeping them.
fn map_paths<T, F>(gen: &PathGenerator, count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&Path) -> Result<T> + Sync + Send,
{
    par::try_map_indexed(count, |j| f(&gen.path(j)?))
}

fn label_of(path: &Path) -> Result<Label> {
    path.label
        .ok_or_else(|| Error::InvalidArgument("unlabelled path".into()))
}

/// Fits the regime's estimators on a labelled dataset.
///
/// With `known_sigma` (or in the unbounded-drift regime) the classifier
/// uses the true `σ²` instead of fitting it.
pub fn fit_plugin(
    cfg: &ExperimentConfig,
    model: &MixtureModel,
    regime: Regime,
    known_sigma: bool,
    train: &Dataset,
) -> Result<PlugIn> {
    let counts = (train.class_count(0), train.class_count(1));
    if regime == Regime::Constant {
        let est = constant_estimators(train, train.len())?;
        return Ok(PlugIn {
            classifier: EstimatedClassifier::from_constant(&est),
            shape: FitShape::default(),
            class_counts: counts,
        });
    }
    let n_total = train.len();
    let mut shape = FitShape::default();
    let mut drifts = Vec::with_capacity(2);
    for c in 0..2u8 {
        let (est, params) =
            fit_drift_scheduled(train, c, cfg.beta, regime, cfg.k_scale, cfg.degree)?;
        if let Some(p) = params {
            shape.drift_k[usize::from(c)] = Some(p.resolution);
            shape.drift_a[usize::from(c)] = Some(p.half_width);
        }
        drifts.push(DriftFn::Spline { estimate: est });
    }
    let sigma_sq = if known_sigma || regime == Regime::UnboundedDrift {
        SigmaSqFn::SquareOf {
            sigma: model.sigma.clone(),
        }
    } else {
        let (a, k) = diffusion_schedule(n_total, cfg.beta, cfg.diffusion_k_scale)?;
        shape.diffusion_k = Some(k);
        shape.diffusion_a = Some(a);
        SigmaSqFn::Spline {
            estimate: fit_diffusion(train, a, k, cfg.degree, n_total)?,
        }
    };
    let b1 = drifts.pop().expect("two drifts");
    let b0 = drifts.pop().expect("two drifts");
    Ok(PlugIn {
        classifier: EstimatedClassifier {
            b0,
            b1,
            sigma_sq,
            p_hat: estimate_p(train),
        },
        shape,
        class_counts: counts,
    })
}

/// Constant-regime plug-in from `count` streamed training paths.
///
/// Identical to [`fit_plugin`] on the materialised dataset.
pub fn fit_constant_streamed(gen: &PathGenerator, count: usize) -> Result<PlugIn> {
    let stats = map_paths(gen, count, |p| Ok((label_of(p)?, path_statistic(p))))?;
    let mut acc = ConstantStats::new();
    for (label, z) in stats {
        acc.push(label, z);
    }
    let est = acc.finish(count)?;
    Ok(PlugIn {
        classifier: EstimatedClassifier::from_constant(&est),
        shape: FitShape::default(),
        class_counts: est.class_counts,
    })
}

/// Plug-in and Bayes error counts on `count` streamed test paths.
pub fn streamed_risk(
    plugin: &EstimatedClassifier,
    bayes: &BayesClassifier,
    gen: &PathGenerator,
    count: usize,
) -> Result<RiskTally> {
    let tallies = map_paths(gen, count, |p| {
        let mut t = RiskTally::default();
        tally_path(&mut t, p, plugin, bayes)?;
        Ok(t)
    })?;
    let mut total = RiskTally::default();
    tallies.iter().for_each(|t| total.merge(t));
    Ok(total)
}

fn train_plugin(
    cfg: &ExperimentConfig,
    model: &MixtureModel,
    regime: Regime,
    known_sigma: bool,
    cell: CellId,
) -> Result<PlugIn> {
    let gen = generator(cfg, model, cell, Stream::Train);
    if regime == Regime::Constant {
        fit_constant_streamed(&gen, cell.n_total)
    } else {
        fit_plugin(cfg, model, regime, known_sigma, &gen.dataset(cell.n_total)?)
    }
}

/// One row of a risk table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiskRow {
    pub cell: CellId,
    pub shape: FitShape,
    pub class_counts: (usize, usize),
    pub tally: RiskTally,
}

fn risk_cell(
    cfg: &ExperimentConfig,
    model: &MixtureModel,
    regime: Regime,
    known_sigma: bool,
    cell: CellId,
) -> Result<RiskRow> {
    let fitted = train_plugin(cfg, model, regime, known_sigma, cell)?;
    let bayes = BayesClassifier::new(model.clone())?;
    let test = generator(cfg, model, cell, Stream::Test);
    let tally = streamed_risk(&fitted.classifier, &bayes, &test, cfg.test_size)?;
    Ok(RiskRow {
        cell,
        shape: fitted.shape,
        class_counts: fitted.class_counts,
        tally,
    })
}

fn provenance_header(member: bool) -> Vec<&'static str> {
    let mut h = vec!["seed", "N", "n", "replicate"];
    if member {
        h.push("member");
    }
    h.extend(["regime", "K_scale"]);
    h.extend(FitShape::HEADER);
    h
}

fn provenance(cfg: &ExperimentConfig, cell: CellId, member: bool, shape: &FitShape) -> Vec<String> {
    let mut r = vec![
        cfg.seed.to_string(),
        cell.n_total.to_string(),
        cell.n.to_string(),
        cell.replicate.to_string(),
    ];
    if member {
        r.push(cell.member.to_string());
    }
    r.push(cfg.regime.as_str().into());
    r.push(fmt_f64(cfg.k_scale));
    r.extend(shape.cells());
    r
}

fn risk_table(cfg: &ExperimentConfig, rows: &[RiskRow], member: bool) -> Table {
    let mut header = provenance_header(member);
    header.extend([
        "N0",
        "N1",
        "test_size",
        "plugin_risk",
        "bayes_risk",
        "excess_risk",
        "disagreement",
    ]);
    let mut table = Table::new(header);
    for row in rows {
        let mut r = provenance(cfg, row.cell, member, &row.shape);
        r.extend([
            row.class_counts.0.to_string(),
            row.class_counts.1.to_string(),
            row.tally.total.to_string(),
            fmt_f64(row.tally.plugin_risk()),
            fmt_f64(row.tally.bayes_risk()),
            fmt_f64(row.tally.excess_risk()),
            fmt_f64(row.tally.disagreement_rate()),
        ]);
        table.push(r);
    }
    table
}

fn aggregate<F: Fn(&T) -> Option<f64>, T>(
    grid: &[usize],
    items: &[T],
    n_of: impl Fn(&T) -> usize,
    value: F,
) -> Vec<RatePoint> {
    grid.iter()
        .map(|&n_total| {
            let vals: Vec<f64> = items
                .iter()
                .filter(|it| n_of(it) == n_total)
                .filter_map(&value)
                .collect();
            let (mean, std) = if vals.is_empty() {
                (f64::NAN, f64::NAN)
            } else {
                mean_std(&vals)
            };
            RatePoint { n_total, mean, std }
        })
        .collect()
}

/// Excess-risk rows, per-`N` aggregates and the log-log fit.
#[derive(Debug, Clone, Serialize)]
pub struct RateReport {
    #[serde(skip)]
    pub rows: Vec<RiskRow>,
    #[serde(skip)]
    pub table: Table,
    pub points: Vec<RatePoint>,
    pub fit: Option<RateFit>,
}

pub fn run_rate_experiment(cfg: &ExperimentConfig) -> Result<RateReport> {
    cfg.validate()?;
    let cells = grid_cells(cfg, 1);
    let rows = run_cells(&cells, |cell| risk_cell(cfg, &cfg.model, cfg.regime, false, cell))?;
    let points = aggregate(&cfg.n_grid, &rows, |r| r.cell.n_total, |r| {
        Some(r.tally.excess_risk())
    });
    Ok(RateReport {
        table: risk_table(cfg, &rows, false),
        fit: RateFit::from_points(points.clone()),
        points,
        rows,
    })
}

/// Empirical norms of one estimation cell; `None` when the test set has no
/// paths of that class or σ² is not estimated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimationRow {
    pub cell: CellId,
    pub shape: FitShape,
    pub class_counts: (usize, usize),
    pub norm_b: [Option<f64>; 2],
    pub norm_sigma_sq: Option<f64>,
}

fn estimation_cell(cfg: &ExperimentConfig, cell: CellId) -> Result<EstimationRow> {
    let model = &cfg.model;
    let fitted = train_plugin(cfg, model, cfg.regime, false, cell)?;
    let clf = &fitted.classifier;
    let sigma_estimated = matches!(clf.sigma_sq, SigmaSqFn::Spline { .. });
    let test = generator(cfg, model, cell, Stream::Test);
    let sums = map_paths(&test, cfg.test_size, |p| {
        let label = label_of(p)?;
        let (est, truth) = match label {
            0 => (&clf.b0, &model.b0),
            _ => (&clf.b1, &model.b1),
        };
        let pts = p.sample_points();
        let drift: Vec<f64> = pts.iter().map(|&x| (est.eval(x) - truth.eval(x)).powi(2)).collect();
        let sigma = if sigma_estimated {
            let sq: Vec<f64> = pts
                .iter()
                .map(|&x| (clf.sigma_sq.eval(x) - model.sigma.eval(x).powi(2)).powi(2))
                .collect();
            par::pairwise_sum(&sq)
        } else {
            0.0
        };
        Ok((label, par::pairwise_sum(&drift), sigma))
    })?;
    let points = cell.n as f64;
    let mut norm_b = [None, None];
    for (c, slot) in norm_b.iter_mut().enumerate() {
        let vals: Vec<f64> = sums
            .iter()
            .filter(|s| usize::from(s.0) == c)
            .map(|s| s.1)
            .collect();
        if !vals.is_empty() {
            *slot = Some((par::pairwise_sum(&vals) / (vals.len() as f64 * points)).sqrt());
        }
    }
    let norm_sigma_sq = sigma_estimated.then(|| {
        let vals: Vec<f64> = sums.iter().map(|s| s.2).collect();
        (par::pairwise_sum(&vals) / (vals.len() as f64 * points)).sqrt()
    });
    Ok(EstimationRow {
        cell,
        shape: fitted.shape,
        class_counts: fitted.class_counts,
        norm_b,
        norm_sigma_sq,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimationReport {
    #[serde(skip)]
    pub rows: Vec<EstimationRow>,
    #[serde(skip)]
    pub table: Table,
    pub points_b0: Vec<RatePoint>,
    pub points_b1: Vec<RatePoint>,
    pub points_sigma_sq: Vec<RatePoint>,
    pub fit_b0: Option<RateFit>,
    pub fit_b1: Option<RateFit>,
    pub fit_sigma_sq: Option<RateFit>,
}

fn require_spline_regime(cfg: &ExperimentConfig, what: &str) -> Result<()> {
    if cfg.regime == Regime::Constant {
        return Err(Error::Config(format!("{what} needs the bounded or unbounded_drift regime")));
    }
    Ok(())
}

pub fn run_estimation_experiment(cfg: &ExperimentConfig) -> Result<EstimationReport> {
    cfg.validate()?;
    require_spline_regime(cfg, "the estimation experiment")?;
    let cells = grid_cells(cfg, 1);
    let rows = run_cells(&cells, |cell| estimation_cell(cfg, cell))?;

    let mut header = provenance_header(false);
    header.extend(["N0", "N1", "norm_b0", "norm_b1", "norm_sigma_sq"]);
    let mut table = Table::new(header);
    for row in &rows {
        let mut r = provenance(cfg, row.cell, false, &row.shape);
        r.extend([
            row.class_counts.0.to_string(),
            row.class_counts.1.to_string(),
            fmt_opt_f64(row.norm_b[0]),
            fmt_opt_f64(row.norm_b[1]),
            fmt_opt_f64(row.norm_sigma_sq),
        ]);
        table.push(r);
    }

    let n_of = |r: &EstimationRow| r.cell.n_total;
    let points_b0 = aggregate(&cfg.n_grid, &rows, n_of, |r| r.norm_b[0]);
    let points_b1 = aggregate(&cfg.n_grid, &rows, n_of, |r| r.norm_b[1]);
    let points_sigma_sq = aggregate(&cfg.n_grid, &rows, n_of, |r| r.norm_sigma_sq);
    Ok(EstimationReport {
        fit_b0: RateFit::from_points(points_b0.clone()),
        fit_b1: RateFit::from_points(points_b1.clone()),
        fit_sigma_sq: RateFit::from_points(points_sigma_sq.clone()),
        points_b0,
        points_b1,
        points_sigma_sq,
        table,
        rows,
    })
}

/// Conditioning of one class's empirical Gram matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramReport {
    pub class_label: Label,
    pub class_size: usize,
    /// `None` when the class has at most one path.
    pub resolution: Option<usize>,
    pub half_width: Option<f64>,
    pub lambda_min: Option<f64>,
    pub inv_lambda_min: Option<f64>,
    /// `N_i / log²(N_i)`.
    pub comparison: Option<f64>,
    pub within_bound: Option<bool>,
}

impl GramReport {
    pub fn skipped(&self) -> bool {
        self.lambda_min.is_none()
    }
}

/// Gram diagnostic for class `label` of `dataset` under the drift schedule.
pub fn gram_report(
    dataset: &Dataset,
    label: Label,
    beta: f64,
    regime: Regime,
    k_scale: f64,
    degree: usize,
    c: f64,
) -> Result<GramReport> {
    let class_size = dataset.class_count(label);
    let mut report = GramReport {
        class_label: label,
        class_size,
        resolution: None,
        half_width: None,
        lambda_min: None,
        inv_lambda_min: None,
        comparison: None,
        within_bound: None,
    };
    if class_size <= 1 {
        return Ok(report);
    }
    let params = schedule(class_size, beta, regime, k_scale)?;
    let spec = make_spec(params.half_width, params.resolution, degree)?;
    let gram = empirical_gram(&spec, dataset, Some(label))?;
    let lambda = min_eigenvalue(&gram);
    let inv = if lambda > 0.0 { 1.0 / lambda } else { f64::INFINITY };
    let comparison = class_size as f64 / (class_size as f64).ln().powi(2);
    report.resolution = Some(params.resolution);
    report.half_width = Some(params.half_width);
    report.lambda_min = Some(lambda);
    report.inv_lambda_min = Some(inv);
    report.comparison = Some(comparison);
    report.within_bound = Some(inv <= c * comparison);
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct GramRow {
    pub cell: CellId,
    pub report: GramReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct GramDiagnostic {
    pub rows: Vec<GramRow>,
    #[serde(skip)]
    pub table: Table,
    pub c: f64,
    pub all_positive_definite: bool,
}

/// Per-replicate, per-class Gram conditioning at sample size `n_total`.
pub fn gram_diagnostic(cfg: &ExperimentConfig, n_total: usize) -> Result<GramDiagnostic> {
    cfg.validate()?;
    require_spline_regime(cfg, "the Gram diagnostic")?;
    if n_total < 4 {
        return Err(Error::Config(format!("N must be at least 4, got {n_total}")));
    }
    let cells: Vec<CellId> = (0..cfg.replicates)
        .map(|replicate| CellId {
            n_total,
            n: cfg.steps(n_total),
            replicate,
            member: 0,
        })
        .collect();
    let per_cell = run_cells(&cells, |cell| {
        let train = generator(cfg, &cfg.model, cell, Stream::Train).dataset(n_total)?;
        (0..2u8)
            .map(|label| {
                gram_report(&train, label, cfg.beta, cfg.regime, cfg.k_scale, cfg.degree, cfg.gram_c)
                    .map(|report| GramRow { cell, report })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let rows: Vec<GramRow> = per_cell.into_iter().flatten().collect();

    let mut header = vec!["seed", "N", "n", "replicate", "regime", "K_scale", "class", "N_i", "K", "A"];
    header.extend(["lambda_min", "inv_lambda_min", "N_i_over_log2", "c", "within_bound", "status"]);
    let mut table = Table::new(header);
    for row in &rows {
        let rep = &row.report;
        table.push(vec![
            cfg.seed.to_string(),
            row.cell.n_total.to_string(),
            row.cell.n.to_string(),
            row.cell.replicate.to_string(),
            cfg.regime.as_str().into(),
            fmt_f64(cfg.k_scale),
            rep.class_label.to_string(),
            rep.class_size.to_string(),
            fmt_opt_usize(rep.resolution),
            fmt_opt_f64(rep.half_width),
            fmt_opt_f64(rep.lambda_min),
            fmt_opt_f64(rep.inv_lambda_min),
            fmt_opt_f64(rep.comparison),
            fmt_f64(cfg.gram_c),
            rep.within_bound.map(|b| b.to_string()).unwrap_or_default(),
            if rep.skipped() { "skipped" } else { "ok" }.into(),
        ]);
    }
    let all_positive_definite = rows
        .iter()
        .all(|r| r.report.lambda_min.map_or(true, |l| l > 0.0));
    Ok(GramDiagnostic {
        rows,
        table,
        c: cfg.gram_c,
        all_positive_definite,
    })
}

/// The lower-bound family configured by `cfg.family`, sized for the
/// largest grid value unless the config pins `N`.
pub fn family_from_config(cfg: &ExperimentConfig) -> Result<HypothesisFamily> {
    let f = &cfg.family;
    let n_total = f
        .sample_size
        .unwrap_or_else(|| *cfg.n_grid.last().expect("validated grid"));
    build_hypothesis_family(
        cfg.beta,
        f.radius,
        f.c0,
        f.kappa,
        n_total,
        f.count,
        stream_seed(cfg.seed, Stream::Family, n_total, 0, 0),
    )
}

/// Model with `b0 = 0`, `b1 = member`, `σ = 1` and equal priors.
pub fn member_model(member: &CoefficientFn) -> Result<MixtureModel> {
    MixtureModel::new(
        CoefficientFn::constant(0.0),
        member.clone(),
        CoefficientFn::constant(1.0),
        0.5,
        0.5,
        0.0,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdversarialPoint {
    #[serde(rename = "N")]
    pub n_total: usize,
    pub max_over_members: f64,
    pub mean_over_members: f64,
    pub worst_member: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdversarialReport {
    #[serde(skip)]
    pub rows: Vec<RiskRow>,
    #[serde(skip)]
    pub table: Table,
    pub family_m: usize,
    pub family_size: usize,
    /// Mean excess risk per `(N, member)`, grid-major.
    pub member_means: Vec<Vec<f64>>,
    pub points: Vec<AdversarialPoint>,
    pub fit_max: Option<RateFit>,
}

/// Runs the plug-in pipeline with each family member as `b1*` and known `σ = 1`.
pub fn run_adversarial_experiment(
    family: &HypothesisFamily,
    cfg: &ExperimentConfig,
) -> Result<AdversarialReport> {
    cfg.validate()?;
    if family.members.is_empty() {
        return Err(Error::InvalidArgument("hypothesis family is empty".into()));
    }
    let regime = match cfg.regime {
        Regime::Constant => Regime::Bounded,
        r => r,
    };
    let models = family
        .members
        .iter()
        .map(member_model)
        .collect::<Result<Vec<_>>>()?;
    let cells = grid_cells(cfg, models.len());
    let rows = run_cells(&cells, |cell| {
        risk_cell(cfg, &models[cell.member], regime, true, cell)
    })?;

    let mut member_means = Vec::with_capacity(cfg.n_grid.len());
    let mut points = Vec::with_capacity(cfg.n_grid.len());
    for &n_total in &cfg.n_grid {
        let means: Vec<f64> = (0..models.len())
            .map(|m| {
                let vals: Vec<f64> = rows
                    .iter()
                    .filter(|r| r.cell.n_total == n_total && r.cell.member == m)
                    .map(|r| r.tally.excess_risk())
                    .collect();
                mean_std(&vals).0
            })
            .collect();
        let (worst_member, max) = means
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best });
        points.push(AdversarialPoint {
            n_total,
            max_over_members: max,
            mean_over_members: mean_std(&means).0,
            worst_member,
        });
        member_means.push(means);
    }
    let fit_max = RateFit::from_points(
        points
            .iter()
            .map(|p| RatePoint {
                n_total: p.n_total,
                mean: p.max_over_members,
                std: 0.0,
            })
            .collect(),
    );
    Ok(AdversarialReport {
        table: risk_table(cfg, &rows, true),
        family_m: family.m,
        family_size: family.members.len(),
        member_means,
        points,
        fit_max,
        rows,
    })
}

/// The first training set of `cfg` at sample size `n_total`.
pub fn simulate_dataset(cfg: &ExperimentConfig, n_total: usize) -> Result<Dataset> {
    cfg.validate()?;
    let cell = CellId {
        n_total,
        n: cfg.steps(n_total),
        replicate: 0,
        member: 0,
    };
    generator(cfg, &cfg.model, cell, Stream::Train).dataset(n_total)
}
