//! Least squares over an ℓ²-ball.
//!
//! Minimises `‖z − B a‖²` subject to `‖a‖² ≤ r`. The unconstrained
//! minimum-norm solution is tried first; when it leaves the ball, the ridge
//! parameter `λ` in `(BᵀB + λI) a = Bᵀz` is bisected until `‖a(λ)‖² = r`.
//! The bisection returns the upper end of its bracket, so the result is
//! always feasible and `λ` is the Lagrange multiplier of the constraint.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spline::{accumulate_outer, DesignMatrix, SplineSpec};

/// Relative eigenvalue cutoff for the minimum-norm solve.
const RANK_TOL: f64 = 1e-12;
/// Relative tolerance on `‖a‖² = r` when the constraint binds.
const RADIUS_TOL: f64 = 1e-10;
/// Bound on `λ·(r − ‖a‖²)` relative to `r`.
const KKT_TOL: f64 = 1e-7;
const MAX_BISECTIONS: usize = 2_000;

/// Sufficient statistics `(BᵀB, Bᵀz, zᵀz, rows)` of a least-squares problem.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalEquations {
    pub gram: DMatrix<f64>,
    pub rhs: DVector<f64>,
    pub response_sq: f64,
    pub rows: usize,
}

impl NormalEquations {
    pub fn zeros(dim: usize) -> Self {
        NormalEquations {
            gram: DMatrix::zeros(dim, dim),
            rhs: DVector::zeros(dim),
            response_sq: 0.0,
            rows: 0,
        }
    }

    pub fn from_design(design: &DesignMatrix, responses: &[f64]) -> Result<Self> {
        if design.rows() != responses.len() || responses.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "design has {} rows but {} responses were given",
                design.rows(),
                responses.len()
            )));
        }
        check_finite(responses)?;
        let b = &design.matrix;
        let z = DVector::from_column_slice(responses);
        Ok(NormalEquations {
            gram: b.transpose() * b,
            rhs: b.transpose() * &z,
            response_sq: z.norm_squared(),
            rows: responses.len(),
        })
    }

    /// Adds one observation `(x, z)` using the local support of the basis.
    pub fn add_point(&mut self, spec: &SplineSpec, x: f64, z: f64) {
        let mut local = [0.0f64; 16];
        let p = spec.degree;
        if let Some(first) = spec.eval_local(x, &mut local[..=p]) {
            for i in 0..=p {
                self.rhs[first + i] += local[i] * z;
            }
            accumulate_outer(spec, x, &mut self.gram);
        }
        self.response_sq += z * z;
        self.rows += 1;
    }

    /// `‖z − B a‖² = zᵀz − 2aᵀBᵀz + aᵀBᵀBa`.
    pub fn objective(&self, coeffs: &[f64]) -> f64 {
        let a = DVector::from_column_slice(coeffs);
        self.response_sq - 2.0 * a.dot(&self.rhs) + a.dot(&(&self.gram * &a))
    }
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::InvalidArgument(format!(
            "response {i} is not finite ({})",
            values[i]
        ))),
        None => Ok(()),
    }
}

/// Solution of the ball-constrained problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstrainedSolution {
    pub coeffs: Vec<f64>,
    pub radius_sq: f64,
    pub multiplier: f64,
    /// Whether the constraint binds. True for `radius_sq = 0`, where the
    /// multiplier is reported as 0.
    pub active: bool,
}

/// Solves `min ‖z − B a‖²` over `‖a‖² ≤ radius_sq`.
pub fn constrained_ls(
    design: &DesignMatrix,
    responses: &[f64],
    radius_sq: f64,
) -> Result<ConstrainedSolution> {
    let eqs = NormalEquations::from_design(design, responses)?;
    solve_normal_equations(&eqs, radius_sq)
}

pub fn solve_normal_equations(
    eqs: &NormalEquations,
    radius_sq: f64,
) -> Result<ConstrainedSolution> {
    if !(radius_sq >= 0.0) || !radius_sq.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "radius_sq must be a finite non-negative number, got {radius_sq}"
        )));
    }
    if !eqs.response_sq.is_finite() || eqs.rhs.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite responses".into()));
    }
    let dim = eqs.rhs.len();
    if radius_sq == 0.0 {
        return Ok(ConstrainedSolution {
            coeffs: vec![0.0; dim],
            radius_sq,
            multiplier: 0.0,
            active: true,
        });
    }

    let eig = SymmetricEigen::new(eqs.gram.clone());
    let top = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let cutoff = RANK_TOL * top;
    // Spectral coordinates (eigenvalue, vᵢᵀ Bᵀz) on the numerical range of BᵀB.
    let spectrum: Vec<(usize, f64, f64)> = (0..dim)
        .filter(|&i| eig.eigenvalues[i] > cutoff)
        .map(|i| (i, eig.eigenvalues[i], eig.eigenvectors.column(i).dot(&eqs.rhs)))
        .collect();

    let norm_sq = |lambda: f64| -> f64 {
        spectrum
            .iter()
            .map(|&(_, e, c)| {
                let t = c / (e + lambda);
                t * t
            })
            .sum()
    };
    let coeffs_at = |lambda: f64| -> Vec<f64> {
        let mut a = DVector::zeros(dim);
        for &(i, e, c) in &spectrum {
            a.axpy(c / (e + lambda), &eig.eigenvectors.column(i), 1.0);
        }
        a.iter().copied().collect()
    };

    if norm_sq(0.0) <= radius_sq {
        return Ok(ConstrainedSolution {
            coeffs: coeffs_at(0.0),
            radius_sq,
            multiplier: 0.0,
            active: false,
        });
    }

    // ‖a(λ)‖² ≤ Σcᵢ²/λ², so this upper end is feasible.
    let c_norm = spectrum.iter().map(|&(_, _, c)| c * c).sum::<f64>().sqrt();
    let mut hi = c_norm / radius_sq.sqrt();
    let mut lo = 0.0;
    for _ in 0..MAX_BISECTIONS {
        let slack = radius_sq - norm_sq(hi);
        if slack <= RADIUS_TOL * radius_sq && hi * slack <= KKT_TOL * radius_sq {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if norm_sq(mid) > radius_sq {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ConstrainedSolution {
        coeffs: coeffs_at(hi),
        radius_sq,
        multiplier: hi,
        active: true,
    })
}
