use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-`N` aggregate of a Monte-Carlo quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    #[serde(rename = "N")]
    pub n_total: usize,
    pub mean: f64,
    pub std: f64,
}

/// Least-squares line through `(ln N, ln mean)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub points: Vec<RatePoint>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

impl RateFit {
    /// Fits over the points with positive mean. `None` when fewer than two remain.
    pub fn from_points(points: Vec<RatePoint>) -> Option<RateFit> {
        let usable: Vec<(f64, f64)> = points
            .iter()
            .filter(|p| p.mean > 0.0 && p.mean.is_finite())
            .map(|p| (p.n_total as f64, p.mean))
            .collect();
        let (slope, intercept, r_squared) = fit_loglog_slope(&usable).ok()?;
        Some(RateFit {
            points,
            slope,
            intercept,
            r_squared,
        })
    }
}

/// Mean and sample standard deviation (0 for a single value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// OLS of `ln value` on `ln N`, returning `(slope, intercept, r²)`.
pub fn fit_loglog_slope(points: &[(f64, f64)]) -> Result<(f64, f64, f64)> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "slope fit needs at least 2 points, got {}",
            points.len()
        )));
    }
    if let Some(&(n, v)) = points
        .iter()
        .find(|&&(n, v)| !(n > 0.0 && v > 0.0 && n.is_finite() && v.is_finite()))
    {
        return Err(Error::InvalidArgument(format!(
            "slope fit needs positive finite points, got ({n}, {v})"
        )));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("slope fit needs distinct N values".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok((slope, intercept, r_squared))
}
