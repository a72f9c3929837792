//! Clamped B-spline basis on `[−A, A]` with uniform interior knots.
//!
//! Basis functions are indexed `0..K+M`; index `ℓ + M` corresponds to the
//! conventional `B_ℓ`, `ℓ ∈ [−M, K−1]`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Label;
use crate::simulate::Dataset;

/// Knot layout: `M + 1` copies of `−A`, equally spaced interior knots,
/// `M + 1` copies of `A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplineSpec {
    pub half_width: f64,
    pub resolution: usize,
    pub degree: usize,
    pub knots: Vec<f64>,
}

impl SplineSpec {
    pub fn new(half_width: f64, resolution: usize, degree: usize) -> Result<Self> {
        make_spec(half_width, resolution, degree)
    }

    /// Number of basis functions, `K + M`.
    #[inline]
    pub fn dim(&self) -> usize {
        self.resolution + self.degree
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        x >= -self.half_width && x <= self.half_width
    }

    /// Knot span `μ` with `knots[μ] ≤ x < knots[μ+1]`; `x = A` maps to the last span.
    fn span(&self, x: f64) -> usize {
        let m = self.degree;
        let k = self.resolution;
        let step = 2.0 * self.half_width / k as f64;
        let mut s = (((x + self.half_width) / step).floor().max(0.0) as usize).min(k - 1);
        // Guard against rounding in the division.
        while s > 0 && x < self.knots[m + s] {
            s -= 1;
        }
        while s + 1 < k && x >= self.knots[m + s + 1] {
            s += 1;
        }
        m + s
    }

    /// Writes the `M + 1` potentially nonzero basis values at `x` into
    /// `out` and returns the index of the first one. Returns `None` outside
    /// `[−A, A]`.
    pub fn eval_local(&self, x: f64, out: &mut [f64]) -> Option<usize> {
        debug_assert!(out.len() > self.degree);
        if !self.contains(x) {
            return None;
        }
        let p = self.degree;
        let mu = self.span(x);
        let t = &self.knots;
        // Triangular form of the Cox–de Boor recursion.
        // make_spec caps the degree at 15.
        let mut left = [0.0f64; 16];
        let mut right = [0.0f64; 16];
        out[0] = 1.0;
        for j in 1..=p {
            left[j] = x - t[mu + 1 - j];
            right[j] = t[mu + j] - x;
            let mut saved = 0.0;
            for r in 0..j {
                let denom = right[r + 1] + left[j - r];
                let temp = if denom == 0.0 { 0.0 } else { out[r] / denom };
                out[r] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            out[j] = saved;
        }
        Some(mu - p)
    }

    /// Value of `Σ coeffs[ℓ]·B_ℓ(x)`; zero outside `[−A, A]`.
    pub fn eval_combination(&self, coeffs: &[f64], x: f64) -> f64 {
        let mut local = [0.0f64; 16];
        match self.eval_local(x, &mut local[..=self.degree]) {
            Some(first) => local[..=self.degree]
                .iter()
                .zip(&coeffs[first..])
                .map(|(b, a)| b * a)
                .sum(),
            None => 0.0,
        }
    }
}

pub fn make_spec(half_width: f64, resolution: usize, degree: usize) -> Result<SplineSpec> {
    if !(half_width > 0.0) || !half_width.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "half-width must be positive, got {half_width}"
        )));
    }
    if resolution < 1 {
        return Err(Error::InvalidArgument("K must be at least 1".into()));
    }
    if !(1..16).contains(&degree) {
        return Err(Error::InvalidArgument(format!(
            "degree must lie in 1..=15, got {degree}"
        )));
    }
    let step = 2.0 * half_width / resolution as f64;
    let mut knots = Vec::with_capacity(resolution + 2 * degree + 1);
    knots.extend(std::iter::repeat(-half_width).take(degree));
    for k in 0..resolution {
        knots.push(-half_width + k as f64 * step);
    }
    knots.extend(std::iter::repeat(half_width).take(degree + 1));
    Ok(SplineSpec {
        half_width,
        resolution,
        degree,
        knots,
    })
}

/// Dense vector `(B_0(x), …, B_{K+M−1}(x))`.
pub fn eval_basis(spec: &SplineSpec, x: f64) -> Vec<f64> {
    let mut row = vec![0.0; spec.dim()];
    let mut local = [0.0f64; 16];
    if let Some(first) = spec.eval_local(x, &mut local[..=spec.degree]) {
        row[first..=first + spec.degree].copy_from_slice(&local[..=spec.degree]);
    }
    row
}

/// Rows of basis values at the sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    pub matrix: DMatrix<f64>,
}

impl DesignMatrix {
    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }
}

pub fn design_matrix(spec: &SplineSpec, xs: &[f64]) -> Result<DesignMatrix> {
    if xs.is_empty() {
        return Err(Error::InvalidArgument("no sample points".into()));
    }
    let mut matrix = DMatrix::zeros(xs.len(), spec.dim());
    let mut local = [0.0f64; 16];
    for (r, &x) in xs.iter().enumerate() {
        if let Some(first) = spec.eval_local(x, &mut local[..=spec.degree]) {
            for (c, &v) in local[..=spec.degree].iter().enumerate() {
                matrix[(r, first + c)] = v;
            }
        }
    }
    Ok(DesignMatrix { matrix })
}

/// Adds `b(x) b(x)ᵀ` into `gram` using the local support of the basis.
pub(crate) fn accumulate_outer(spec: &SplineSpec, x: f64, gram: &mut DMatrix<f64>) {
    let mut local = [0.0f64; 16];
    let p = spec.degree;
    if let Some(first) = spec.eval_local(x, &mut local[..=p]) {
        for i in 0..=p {
            for j in 0..=p {
                gram[(first + i, first + j)] += local[i] * local[j];
            }
        }
    }
}

/// `(1/(N·n)) Σ_j Σ_{k<n} b(X^j_{kΔ}) b(X^j_{kΔ})ᵀ` over the selected paths.
pub fn empirical_gram(
    spec: &SplineSpec,
    dataset: &Dataset,
    class_filter: Option<Label>,
) -> Result<DMatrix<f64>> {
    let dim = spec.dim();
    let mut gram = DMatrix::zeros(dim, dim);
    let mut count = 0usize;
    for path in dataset.select(class_filter) {
        for &x in path.sample_points() {
            accumulate_outer(spec, x, &mut gram);
        }
        count += 1;
    }
    if count == 0 {
        return Err(Error::EmptySelection(format!(
            "no paths with label {class_filter:?}"
        )));
    }
    gram /= (count * dataset.n()) as f64;
    Ok(gram)
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(matrix: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(matrix.clone())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// `‖P⁻¹‖_op = 1/λ_min`, or `+∞` when `λ_min ≤ 0`.
pub fn inverse_op_norm(gram: &DMatrix<f64>) -> f64 {
    let lambda = min_eigenvalue(gram);
    if lambda > 0.0 {
        1.0 / lambda
    } else {
        f64::INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MixtureModel;
    use crate::simulate::{generate_dataset, Path};
    use proptest::prelude::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn knot_vectors() {
        let s = make_spec(1.0, 2, 1).unwrap();
        assert_eq!(s.knots, vec![-1.0, -1.0, 0.0, 1.0, 1.0]);
        assert_eq!(s.dim(), 3);
        let s = make_spec(1.0, 1, 1).unwrap();
        assert_eq!(s.knots, vec![-1.0, -1.0, 1.0, 1.0]);
        assert_eq!(s.dim(), 2);
        let s = make_spec(2.5, 4, 3).unwrap();
        assert_eq!(s.dim(), 7);
        assert_eq!(s.knots.len(), 4 + 2 * 3 + 1);
        for k in 0..=4 {
            assert!((s.knots[3 + k] - (-2.5 + 1.25 * k as f64)).abs() < 1e-15);
        }
        assert!(s.knots[..=3].iter().all(|&u| u == -2.5));
        assert!(s.knots[7..].iter().all(|&u| u == 2.5));
    }

    #[test]
    fn spec_rejects_bad_input() {
        assert!(make_spec(0.0, 2, 1).is_err());
        assert!(make_spec(-1.0, 2, 1).is_err());
        assert!(make_spec(1.0, 0, 1).is_err());
        assert!(make_spec(1.0, 2, 0).is_err());
    }

    /// Degree-1 hats written out directly.
    fn hat(knots: &[f64], x: f64, i: usize) -> f64 {
        let (a, b, c) = (knots[i], knots[i + 1], knots[i + 2]);
        if x >= a && x <= b && b > a {
            (x - a) / (b - a)
        } else if x > b && x <= c && c > b {
            (c - x) / (c - b)
        } else if x == b && b == a {
            1.0
        } else {
            0.0
        }
    }

    #[test]
    fn linear_basis_values() {
        let s = make_spec(1.0, 2, 1).unwrap();
        assert!(close(&eval_basis(&s, -1.0), &[1.0, 0.0, 0.0], 1e-15));
        assert!(close(&eval_basis(&s, 0.0), &[0.0, 1.0, 0.0], 1e-15));
        assert!(close(&eval_basis(&s, 0.5), &[0.0, 0.5, 0.5], 1e-15));
        assert!(close(&eval_basis(&s, 1.0), &[0.0, 0.0, 1.0], 1e-15));
        for i in 0..=40 {
            let x = -1.0 + i as f64 / 20.0;
            let direct: Vec<f64> = (0..3).map(|l| hat(&s.knots, x, l)).collect();
            assert!(close(&eval_basis(&s, x), &direct, 1e-14), "x = {x}");
        }
    }

    #[test]
    fn cubic_single_interval_is_bernstein() {
        let s = make_spec(1.0, 1, 3).unwrap();
        for i in 0..=20 {
            let x = -1.0 + i as f64 / 10.0;
            let t = (x + 1.0) / 2.0;
            let u = 1.0 - t;
            let bern = [u * u * u, 3.0 * t * u * u, 3.0 * t * t * u, t * t * t];
            assert!(close(&eval_basis(&s, x), &bern, 1e-14));
        }
    }

    #[test]
    fn outside_interval_is_zero() {
        let s = make_spec(2.0, 5, 2).unwrap();
        assert!(eval_basis(&s, 2.0 + 1e-12).iter().all(|&v| v == 0.0));
        assert!(eval_basis(&s, -3.0).iter().all(|&v| v == 0.0));
        assert_eq!(eval_basis(&s, 2.0)[s.dim() - 1], 1.0);
    }

    #[test]
    fn design_matrix_rows() {
        let s = make_spec(1.5, 6, 3).unwrap();
        let d = design_matrix(&s, &[-1.5, 1.5, 4.0]).unwrap();
        assert_eq!(d.cols(), 9);
        assert_eq!(d.matrix[(0, 0)], 1.0);
        assert_eq!(d.matrix.row(0).sum(), 1.0);
        assert_eq!(d.matrix[(1, 8)], 1.0);
        assert_eq!(d.matrix.row(1).sum(), 1.0);
        assert_eq!(d.matrix.row(2).sum(), 0.0);
        let xs: Vec<f64> = (0..100).map(|i| -1.5 + 3.0 * i as f64 / 99.0).collect();
        let d = design_matrix(&s, &xs).unwrap();
        for r in 0..100 {
            assert!((d.matrix.row(r).sum() - 1.0).abs() < 1e-12);
        }
        assert!(design_matrix(&s, &[]).is_err());
    }

    #[test]
    fn gram_of_constant_path_is_rank_one() {
        let s = make_spec(1.0, 2, 1).unwrap();
        let ds = Dataset::new(vec![Path::new(vec![0.0; 11], Some(0)).unwrap()]).unwrap();
        let g = empirical_gram(&s, &ds, None).unwrap();
        let mut expected = DMatrix::zeros(3, 3);
        expected[(1, 1)] = 1.0;
        assert_eq!(g, expected);
        assert!(empirical_gram(&s, &ds, Some(1)).is_err());
    }

    #[test]
    fn gram_of_brownian_paths() {
        let model = MixtureModel::constant(0.0, 0.0, 1.0, 0.5).unwrap();
        let ds = generate_dataset(&model, 200, 100, 8).unwrap();
        let s = make_spec(2.0, 4, 3).unwrap();
        let g = empirical_gram(&s, &ds, None).unwrap();
        assert!(min_eigenvalue(&g) > 0.0);
        assert!((&g - g.transpose()).abs().max() <= 1e-14);
        let doubled = ds.concat(&ds).unwrap();
        let g2 = empirical_gram(&s, &doubled, None).unwrap();
        assert!((&g - &g2).abs().max() <= 1e-13);
    }

    #[test]
    fn inverse_norm_simple() {
        assert!((inverse_op_norm(&DMatrix::identity(5, 5)) - 1.0).abs() < 1e-14);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 0.5]));
        assert!((inverse_op_norm(&d) - 2.0).abs() < 1e-14);
        let singular = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert_eq!(inverse_op_norm(&singular), f64::INFINITY);
    }

    /// Smallest root of the characteristic polynomial of a 4×4 symmetric PSD
    /// matrix, bracketed on `[0, trace]` and found by bisection on
    /// Faddeev–LeVerrier coefficients.
    fn char_poly_min_root(a: &DMatrix<f64>) -> f64 {
        let n = a.nrows();
        let mut coeffs = vec![1.0];
        let mut m = DMatrix::<f64>::zeros(n, n);
        let id = DMatrix::<f64>::identity(n, n);
        for k in 1..=n {
            m = a * &m + &id * coeffs[k - 1];
            let c = -(a * &m).trace() / k as f64;
            coeffs.push(c);
        }
        let p = |x: f64| coeffs.iter().fold(0.0, |acc, c| acc * x + c);
        // Scan for the first sign change, then bisect.
        let hi_end = a.trace() + 1.0;
        let steps = 200_000;
        let mut lo = -1e-12;
        let mut plo = p(lo);
        for i in 1..=steps {
            let x = hi_end * i as f64 / steps as f64;
            let px = p(x);
            if px == 0.0 || px.signum() != plo.signum() {
                let mut hi = x;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if p(mid).signum() == plo.signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return 0.5 * (lo + hi);
            }
            lo = x;
            plo = px;
        }
        f64::NAN
    }

    #[test]
    fn inverse_norm_matches_characteristic_polynomial() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let b = DMatrix::from_fn(50, 4, |_, _| rng.gen_range(-1.0..1.0));
        let g = b.transpose() * &b / 50.0;
        let oracle = 1.0 / char_poly_min_root(&g);
        let got = inverse_op_norm(&g);
        assert!((got - oracle).abs() <= 1e-8 * oracle.max(1.0), "{got} vs {oracle}");
    }

    proptest! {
        #[test]
        fn partition_of_unity(k in 1usize..=50, m in 1usize..=3, a in 0.1f64..10.0, u in 0.0f64..=1.0) {
            let s = make_spec(a, k, m).unwrap();
            let x = -a + 2.0 * a * u;
            let row = eval_basis(&s, x);
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-10);
            prop_assert!(row.iter().all(|&v| v >= 0.0));
            prop_assert!(row.iter().filter(|&&v| v != 0.0).count() <= m + 1);
        }

        #[test]
        fn combination_matches_dense(k in 1usize..=20, m in 1usize..=3, x in -3.0f64..3.0) {
            let s = make_spec(2.0, k, m).unwrap();
            let coeffs: Vec<f64> = (0..s.dim()).map(|i| (i as f64).sin()).collect();
            let dense: f64 = eval_basis(&s, x).iter().zip(&coeffs).map(|(b, a)| b * a).sum();
            prop_assert!((s.eval_combination(&coeffs, x) - dense).abs() <= 1e-12);
        }
    }

    #[test]
    fn higher_degree_is_continuous() {
        for m in 2..=3 {
            let s = make_spec(1.0, 7, m).unwrap();
            let jump = |pts: usize| {
                let xs: Vec<Vec<f64>> = (0..=pts)
                    .map(|i| eval_basis(&s, -1.0 + 2.0 * i as f64 / pts as f64))
                    .collect();
                xs.windows(2)
                    .map(|w| w[0].iter().zip(&w[1]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
                    .fold(0.0, f64::max)
            };
            let coarse = jump(1_000);
            let fine = jump(10_000);
            assert!(fine < coarse / 5.0, "m = {m}: {coarse} -> {fine}");
        }
    }
}
