//! Euler–Maruyama simulation of labelled paths and the regression
//! responses built from their increments.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::model::{sample_label, Label, MixtureModel};
use crate::par;

/// A trajectory observed at times `kΔ`, `k = 0..=n`, with `Δ = 1/n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub values: Vec<f64>,
    pub label: Option<Label>,
}

impl Path {
    pub fn new(values: Vec<f64>, label: Option<Label>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidArgument(
                "a path needs at least two observations".into(),
            ));
        }
        Ok(Path { values, label })
    }

    /// Number of steps.
    #[inline]
    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    #[inline]
    pub fn delta(&self) -> f64 {
        1.0 / self.n() as f64
    }

    /// `X_n − X_0`.
    pub fn displacement(&self) -> f64 {
        self.values[self.n()] - self.values[0]
    }

    /// Left endpoints `X_{kΔ}`, `k = 0..n`, where the regressions are evaluated.
    pub fn sample_points(&self) -> &[f64] {
        &self.values[..self.n()]
    }
}

/// Labelled paths sharing one step count.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub paths: Vec<Path>,
    n: usize,
}

impl Dataset {
    pub fn new(paths: Vec<Path>) -> Result<Self> {
        let n = paths
            .first()
            .map(Path::n)
            .ok_or_else(|| Error::EmptySelection("dataset has no paths".into()))?;
        if let Some(j) = paths.iter().position(|p| p.n() != n) {
            return Err(Error::InvalidArgument(format!(
                "path {j} has {} steps, expected {n}",
                paths[j].n()
            )));
        }
        Ok(Dataset { paths, n })
    }

    /// Steps per path.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Number of paths carrying `label`.
    pub fn class_count(&self, label: Label) -> usize {
        self.paths
            .iter()
            .filter(|p| p.label == Some(label))
            .count()
    }

    /// Paths matching the filter (all paths when `class_filter` is `None`).
    pub fn select(&self, class_filter: Option<Label>) -> impl Iterator<Item = &Path> {
        self.paths
            .iter()
            .filter(move |p| class_filter.map_or(true, |c| p.label == Some(c)))
    }

    pub fn concat(&self, other: &Dataset) -> Result<Dataset> {
        let mut paths = self.paths.clone();
        paths.extend(other.paths.iter().cloned());
        Dataset::new(paths)
    }

    /// Writes the plain-text format: header `n N`, then `label v0 … vn` per
    /// path (`-` for an unlabelled path).
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{} {}", self.n, self.len())?;
        let mut line = String::new();
        for path in &self.paths {
            line.clear();
            match path.label {
                Some(l) => write!(line, "{l}").unwrap(),
                None => line.push('-'),
            }
            for v in &path.values {
                // Display for f64 prints the shortest round-trip representation.
                write!(line, " {v}").unwrap();
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn read_text<R: BufRead>(input: R) -> Result<Dataset> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("missing header".into()))??;
        let mut fields = header.split_whitespace();
        let parse_usize = |s: Option<&str>, what: &str| -> Result<usize> {
            s.and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Format(format!("bad {what} in header")))
        };
        let n = parse_usize(fields.next(), "n")?;
        let count = parse_usize(fields.next(), "N")?;
        let mut paths = Vec::with_capacity(count);
        for (row, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let label = match tokens.next() {
                Some("-") => None,
                Some("0") => Some(0),
                Some("1") => Some(1),
                other => {
                    return Err(Error::Format(format!("row {row}: bad label {other:?}")))
                }
            };
            let values = tokens
                .map(|t| t.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Format(format!("row {row}: {e}")))?;
            if values.len() != n + 1 {
                return Err(Error::Format(format!(
                    "row {row}: expected {} values, found {}",
                    n + 1,
                    values.len()
                )));
            }
            paths.push(Path { values, label });
        }
        if paths.len() != count {
            return Err(Error::Format(format!(
                "header announces {count} paths, found {}",
                paths.len()
            )));
        }
        Dataset::new(paths)
    }
}

/// Independent random stream for path `index` under `seed`.
pub fn path_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// One Euler–Maruyama path at resolution `1/n`, no sub-stepping.
pub fn euler_maruyama<R: rand::Rng + ?Sized>(
    model: &MixtureModel,
    label: Label,
    n: usize,
    rng: &mut R,
) -> Result<Path> {
    euler_maruyama_substeps(model, label, n, 1, rng)
}

/// Euler–Maruyama at step `Δ/substeps`, observed every `substeps` steps.
pub fn euler_maruyama_substeps<R: rand::Rng + ?Sized>(
    model: &MixtureModel,
    label: Label,
    n: usize,
    substeps: usize,
    rng: &mut R,
) -> Result<Path> {
    if n == 0 || substeps == 0 {
        return Err(Error::InvalidArgument(
            "n and substeps must be at least 1".into(),
        ));
    }
    let drift = model.drift(label);
    let sigma = &model.sigma;
    let dt = 1.0 / (n * substeps) as f64;
    let sqrt_dt = dt.sqrt();
    let mut values = Vec::with_capacity(n + 1);
    let mut x = model.x0;
    values.push(x);
    for k in 0..n {
        for _ in 0..substeps {
            let xi: f64 = StandardNormal.sample(rng);
            x += drift.eval(x) * dt + sigma.eval(x) * sqrt_dt * xi;
        }
        if !x.is_finite() {
            return Err(Error::NonFinitePath {
                path: 0,
                step: k + 1,
                value: x,
            });
        }
        values.push(x);
    }
    Ok(Path {
        values,
        label: Some(label),
    })
}

/// Reproducible source of labelled paths: path `j` depends only on
/// `(seed, j)`.
#[derive(Debug, Clone)]
pub struct PathGenerator<'a> {
    pub model: &'a MixtureModel,
    pub n: usize,
    pub substeps: usize,
    pub seed: u64,
}

impl<'a> PathGenerator<'a> {
    pub fn new(model: &'a MixtureModel, n: usize, seed: u64) -> Self {
        PathGenerator {
            model,
            n,
            substeps: 1,
            seed,
        }
    }

    pub fn with_substeps(mut self, substeps: usize) -> Self {
        self.substeps = substeps;
        self
    }

    pub fn path(&self, index: usize) -> Result<Path> {
        let mut rng = path_rng(self.seed, index as u64);
        let label = sample_label(self.model.p0, &mut rng)?;
        euler_maruyama_substeps(self.model, label, self.n, self.substeps, &mut rng).map_err(
            |e| match e {
                Error::NonFinitePath { step, value, .. } => Error::NonFinitePath {
                    path: index,
                    step,
                    value,
                },
                other => other,
            },
        )
    }

    /// Paths `0..count`, generated in parallel but identical to sequential order.
    pub fn dataset(&self, count: usize) -> Result<Dataset> {
        if count == 0 {
            return Err(Error::InvalidArgument("N must be at least 1".into()));
        }
        let paths = par::try_map_indexed(count, |j| self.path(j))?;
        Dataset::new(paths)
    }
}

/// `N` labelled paths with `n` steps each; deterministic in `seed`.
pub fn generate_dataset(
    model: &MixtureModel,
    count: usize,
    n: usize,
    seed: u64,
) -> Result<Dataset> {
    PathGenerator::new(model, n, seed).dataset(count)
}

/// Difference quotients `Z_k = (X_{k+1} − X_k)/Δ`.
pub fn responses_z(path: &Path) -> Vec<f64> {
    let n = path.n() as f64;
    path.values.windows(2).map(|w| (w[1] - w[0]) * n).collect()
}

/// Squared increments scaled by `1/Δ`: `U_k = (X_{k+1} − X_k)²/Δ`.
pub fn responses_u(path: &Path) -> Vec<f64> {
    let n = path.n() as f64;
    path.values
        .windows(2)
        .map(|w| {
            let d = w[1] - w[0];
            d * d * n
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CoefficientFn;

    fn line_path(n: usize) -> Path {
        Path::new((0..=n).map(|k| k as f64 / n as f64).collect(), None).unwrap()
    }

    #[test]
    fn responses_on_unit_slope_line() {
        let p = line_path(50);
        assert!(responses_z(&p).iter().all(|&z| (z - 1.0).abs() < 1e-12));
        assert!(responses_u(&p).iter().all(|&u| (u - 0.02).abs() < 1e-12));
        let zero = Path::new(vec![0.0; 11], None).unwrap();
        assert!(responses_z(&zero).iter().all(|&z| z == 0.0));
        assert!(responses_u(&zero).iter().all(|&u| u == 0.0));
    }

    #[test]
    fn u_is_z_squared_times_delta() {
        let model = MixtureModel::bump_example();
        let ds = generate_dataset(&model, 5, 200, 3).unwrap();
        for p in &ds.paths {
            let dt = p.delta();
            for (z, u) in responses_z(p).iter().zip(responses_u(p)) {
                assert!((z * z * dt - u).abs() <= 1e-12 * u.max(1.0));
            }
        }
    }

    #[test]
    fn first_value_is_x0_and_length_is_n_plus_one() {
        let mut model = MixtureModel::bump_example();
        model.x0 = 0.4;
        let ds = generate_dataset(&model, 3, 17, 1).unwrap();
        for p in &ds.paths {
            assert_eq!(p.values[0], 0.4);
            assert_eq!(p.values.len(), 18);
            assert!(p.values.iter().all(|v| v.is_finite()));
        }
    }

    #[test]
    fn datasets_are_deterministic() {
        let model = MixtureModel::constant(0.0, 1.0, 1.0, 0.5).unwrap();
        let a = generate_dataset(&model, 100, 20, 42).unwrap();
        let b = generate_dataset(&model, 100, 20, 42).unwrap();
        assert_eq!(a, b);
        let c = generate_dataset(&model, 100, 20, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn class_counts() {
        let model = MixtureModel::constant(0.0, 1.0, 1.0, 0.3).unwrap();
        let ds = generate_dataset(&model, 10_000, 2, 9).unwrap();
        let n0 = ds.class_count(0);
        assert_eq!(n0 + ds.class_count(1), ds.len());
        assert!((n0 as f64 / 1e4 - 0.3).abs() < 0.02);
        let single = generate_dataset(&model, 1, 4, 9).unwrap();
        assert_eq!(single.class_count(0) + single.class_count(1), 1);
        assert!(generate_dataset(&model, 0, 4, 9).is_err());
    }

    #[test]
    fn explosive_model_is_reported() {
        let model = MixtureModel::new(
            CoefficientFn::Affine {
                slope: 1e6,
                intercept: 1.0,
            },
            CoefficientFn::Affine {
                slope: 1e6,
                intercept: 1.0,
            },
            CoefficientFn::constant(1.0),
            0.5,
            0.5,
            0.0,
        )
        .unwrap();
        match generate_dataset(&model, 4, 100, 0) {
            Err(Error::NonFinitePath { path, .. }) => assert_eq!(path, 0),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn z_mean_matches_constant_drift() {
        let model = MixtureModel::constant(0.8, 0.8, 1.0, 0.5).unwrap();
        // N·n = 10⁶ terms; the mean is the average displacement, sd 1/√N.
        let ds = generate_dataset(&model, 100_000, 10, 17).unwrap();
        let (sum, count) = ds.paths.iter().fold((0.0, 0usize), |(s, c), p| {
            let z = responses_z(p);
            (s + z.iter().sum::<f64>(), c + z.len())
        });
        assert_eq!(count, 1_000_000);
        assert!((sum / count as f64 - 0.8).abs() < 0.01);
    }

    #[test]
    fn u_mean_matches_sigma_squared() {
        let model = MixtureModel::constant(0.0, 0.0, 2.0, 0.5).unwrap();
        let ds = generate_dataset(&model, 1000, 1000, 23).unwrap();
        let total: f64 = ds.paths.iter().map(|p| responses_u(p).iter().sum::<f64>()).sum();
        let mean = total / 1e6;
        assert!((mean - 4.0).abs() < 0.05, "{mean}");
    }

    #[test]
    fn text_format_round_trips() {
        let model = MixtureModel::bump_example();
        let mut ds = generate_dataset(&model, 7, 9, 5).unwrap();
        ds.paths[3].label = None;
        let mut buf = Vec::new();
        ds.write_text(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("9 7\n"));
        let back = Dataset::read_text(&buf[..]).unwrap();
        assert_eq!(ds, back);
    }

    #[test]
    fn text_format_rejects_garbage() {
        assert!(Dataset::read_text(&b"2 1\n0 0 1\n"[..]).is_err());
        assert!(Dataset::read_text(&b"1 2\n0 0 1\n"[..]).is_err());
        assert!(Dataset::read_text(&b"1 1\n7 0 1\n"[..]).is_err());
        assert!(Dataset::read_text(&b""[..]).is_err());
    }

    #[test]
    fn substeps_refine_without_changing_shape() {
        let model = MixtureModel::bump_example();
        let g = PathGenerator::new(&model, 10, 1).with_substeps(8);
        let p = g.path(0).unwrap();
        assert_eq!(p.values.len(), 11);
    }
}
