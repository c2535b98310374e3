//! Lebesgue (quasi-)norms of sampled functions.
//!
//! All integrals are Riemann sums with the uniform weight `2^{-Jd}`, so the
//! torus has total measure one and `‖1‖_p = 1` for every `p`.

use super::{Grid, GridFunction};
use crate::error::{Error, Result};

/// Validate a Lebesgue exponent: finite and strictly positive.
pub fn check_exponent(p: f64) -> Result<()> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::parameter(format!(
            "Lebesgue exponent must be finite and > 0, got {p}"
        )));
    }
    Ok(())
}

/// `‖f‖_p = (2^{-Jd} Σ_x |f(x)|^p)^{1/p}` for `0 < p < ∞`.
pub fn lp_norm(f: &GridFunction, p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok(lp_norm_of_abs(f.grid(), &f.abs_samples(), p))
}

/// Same as [`lp_norm`] but over a pre-computed magnitude buffer.
pub fn lp_norm_of_abs(grid: Grid, abs: &[f64], p: f64) -> f64 {
    debug_assert_eq!(abs.len(), grid.total());
    let sum: f64 = if p == 1.0 {
        abs.iter().sum()
    } else if p == 2.0 {
        abs.iter().map(|v| v * v).sum()
    } else {
        abs.iter().map(|v| v.powf(p)).sum()
    };
    (grid.cell_measure() * sum).powf(p.recip())
}

/// `‖f‖_∞ = max_x |f(x)|`.
pub fn sup_norm(f: &GridFunction) -> f64 {
    f.samples().iter().map(|c| c.norm()).fold(0.0f64, f64::max)
}
