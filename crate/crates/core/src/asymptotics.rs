//! Dimension and coefficient estimates from the error sequence `V_n`.
//!
//! With `V_n - V_inf ~ C n^{-s}` the quantization dimension of order 2 is
//! `2 / s`. The defining ratio `2 log n / -log(V_n - V_inf)` approaches that
//! limit only logarithmically, so the slope of a log-log least-squares fit is
//! the practical estimator.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::closed_form::{excess_exact, scaled_excess_exact};
use crate::error::{Error, Result};

/// Order of the quantization error (squared Euclidean distance).
pub const ORDER: f64 = 2.0;

pub fn excess(n: u32) -> Result<f64> {
    Ok(excess_exact(n)?.to_f64().expect("bounded rational"))
}

/// `2 log n / -log(V_n - V_inf)`.
pub fn dimension_direct(n: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("n = {n} (log n must be positive)")));
    }
    let e = excess(n)?;
    if e >= 1.0 {
        return Err(Error::Domain(format!("excess {e} at n = {n}")));
    }
    Ok(ORDER * f64::from(n).ln() / -e.ln())
}

/// `n^{2/D} (V_n - V_inf)` with `D = 2`, i.e. `n (V_n - V_inf)`.
pub fn coefficient_estimate(n: u32) -> Result<f64> {
    Ok(scaled_excess_exact(n)?.to_f64().expect("bounded rational"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionEstimate {
    pub slope: f64,
    pub intercept: f64,
    pub dimension: f64,
    pub sample_range: (u32, u32),
    /// Largest absolute residual of the fit in log space.
    pub residual: f64,
}

/// Geometrically spaced integers from `n_min` to `n_max`, deduplicated.
pub fn geometric_samples(n_min: u32, n_max: u32, samples: usize) -> Vec<u32> {
    if samples < 2 || n_min == 0 || n_max <= n_min {
        return Vec::new();
    }
    let ratio = f64::from(n_max) / f64::from(n_min);
    let mut out: Vec<u32> = (0..samples)
        .map(|k| {
            let frac = k as f64 / (samples - 1) as f64;
            (f64::from(n_min) * ratio.powf(frac)).round() as u32
        })
        .collect();
    out[0] = n_min;
    out[samples - 1] = n_max;
    out.dedup();
    out
}

/// Least-squares line through `(ln n, ln y)`.
pub fn fit_log_log(data: &[(f64, f64)]) -> Result<(f64, f64, f64)> {
    if data.len() < 2 {
        return Err(Error::Domain("fewer than two samples".into()));
    }
    if data.iter().any(|&(n, y)| !(n > 0.0) || !(y > 0.0)) {
        return Err(Error::Domain("non-positive sample".into()));
    }
    let pts: Vec<(f64, f64)> = data.iter().map(|&(n, y)| (n.ln(), y.ln())).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("all samples share one abscissa".into()));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = pts
        .iter()
        .map(|&(x, y)| (y - (intercept + slope * x)).abs())
        .fold(0.0, f64::max);
    Ok((slope, intercept, residual))
}

/// Fits `ln(V_n - V_inf)` against `ln n` over geometrically spaced `n`.
pub fn dimension_regression(n_min: u32, n_max: u32, samples: usize) -> Result<RegressionEstimate> {
    if n_min < 2 || n_max <= n_min || samples < 2 {
        return Err(Error::Domain(format!(
            "range [{n_min}, {n_max}] with {samples} samples"
        )));
    }
    let ns = geometric_samples(n_min, n_max, samples);
    let data = ns
        .iter()
        .map(|&n| Ok((f64::from(n), excess(n)?)))
        .collect::<Result<Vec<_>>>()?;
    let (slope, intercept, residual) = fit_log_log(&data)?;
    Ok(RegressionEstimate {
        slope,
        intercept,
        dimension: ORDER / slope.abs(),
        sample_range: (n_min, n_max),
        residual,
    })
}
