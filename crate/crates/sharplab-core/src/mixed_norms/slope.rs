//! Least-squares slope fitting for growth-exponent measurements.

use crate::error::{Error, Result};

/// A fitted line through a point cloud, with its coefficient of
/// determination. For log–log fits the points are stored as
/// `(log2 x, log2 y)`; for plain linear fits they are stored as given.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

fn fit(points: Vec<(f64, f64)>) -> Result<SlopeFit> {
    if points.len() < 3 {
        return Err(Error::parameter(format!(
            "slope fitting needs at least 3 points, got {}",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == 0.0 {
        return Err(Error::parameter("slope fitting needs at least two distinct x values".to_string()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 =
        points.iter().map(|p| (p.1 - (intercept + slope * p.0)).powi(2)).sum();
    let ss_tot: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    // Constant data is fit perfectly by the horizontal line.
    let r_squared = if ss_tot == 0.0 { 1.0 } else { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) };
    Ok(SlopeFit { points, slope, intercept, r_squared })
}

/// Least squares on `(log2 x, log2 y)`: the slope is the power-law
/// exponent. All data must be strictly positive.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<SlopeFit> {
    if xs.len() != ys.len() {
        return Err(Error::parameter(format!(
            "mismatched data lengths {} vs {}",
            xs.len(),
            ys.len()
        )));
    }
    let mut points = Vec::with_capacity(xs.len());
    for (&x, &y) in xs.iter().zip(ys) {
        if !(x > 0.0 && y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::parameter(format!(
                "log-log fitting needs positive finite data, got ({x}, {y})"
            )));
        }
        points.push((x.log2(), y.log2()));
    }
    fit(points)
}

/// Plain least squares on `(x, y)`.
pub fn linear_slope(xs: &[f64], ys: &[f64]) -> Result<SlopeFit> {
    if xs.len() != ys.len() {
        return Err(Error::parameter(format!(
            "mismatched data lengths {} vs {}",
            xs.len(),
            ys.len()
        )));
    }
    for (&x, &y) in xs.iter().zip(ys) {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::parameter(format!("fitting needs finite data, got ({x}, {y})")));
        }
    }
    fit(xs.iter().copied().zip(ys.iter().copied()).collect())
}
