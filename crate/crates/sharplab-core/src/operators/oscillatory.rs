//! Oscillating symbols `e^{i|ξ|^γ}` — globally (with a Sobolev-type damping
//! `(1+|ξ|²)^{-b/2}`) and restricted to dyadic frequency shells.
//!
//! The shell window `w(t)` is a smooth radial profile supported on
//! `0.55 ≤ t ≤ 1.55` and identically 1 on `[2^{-1/2}, 2^{1/2}]`, so the
//! dilates `w(2^{-k}|ξ|)` cover every frequency: each `|ξ| ≥ 1` lies in the
//! plateau of at least one `k`. The companion wide window
//! [`wide_window_profile`] equals 1 wherever `w` is nonzero and vanishes for
//! `t ≥ 1.95` — convolving with its kernel reproduces any function whose
//! spectrum sits in shell `k` exactly.
//!
//! With the `e^{2πi ξ·x}` transform convention, the shell-`k` kernel of
//! `e^{i|ξ|^γ}` concentrates where the phase is stationary:
//! `|x| = γ|ξ|^{γ-1}/(2π)` for `|ξ| ∈ [0.55, 1.55]·2^k`.

use crate::constructions::mollifier::smooth_step;
use crate::error::{Error, Result};
use crate::grid::{BandLimit, Grid, GridFunction};
use num_complex::Complex64;

/// Inner edge of the shell window's support.
pub const SHELL_SUPPORT_LO: f64 = 0.55;
/// Outer edge of the shell window's support.
pub const SHELL_SUPPORT_HI: f64 = 1.55;
/// Plateau `[2^{-1/2}, 2^{1/2}]` of the shell window.
pub const SHELL_PLATEAU_LO: f64 = std::f64::consts::FRAC_1_SQRT_2;
/// Upper plateau edge.
pub const SHELL_PLATEAU_HI: f64 = std::f64::consts::SQRT_2;
/// Outer edge of the wide window's support.
pub const WIDE_SUPPORT_HI: f64 = 1.95;

/// Smooth radial shell window: 0 outside `(0.55, 1.55)`, 1 on
/// `[2^{-1/2}, 2^{1/2}]`, smooth ramps in between.
pub fn shell_window_profile(t: f64) -> f64 {
    if t <= SHELL_SUPPORT_LO || t >= SHELL_SUPPORT_HI {
        0.0
    } else if t < SHELL_PLATEAU_LO {
        smooth_step((SHELL_PLATEAU_LO - t) / (SHELL_PLATEAU_LO - SHELL_SUPPORT_LO))
    } else if t <= SHELL_PLATEAU_HI {
        1.0
    } else {
        smooth_step((t - SHELL_PLATEAU_HI) / (SHELL_SUPPORT_HI - SHELL_PLATEAU_HI))
    }
}

/// Smooth wide window: 1 for `t ≤ 1.55` (covering the shell window's whole
/// support), smooth ramp to 0 at `t = 1.95`.
pub fn wide_window_profile(t: f64) -> f64 {
    if t <= SHELL_SUPPORT_HI {
        1.0
    } else if t >= WIDE_SUPPORT_HI {
        0.0
    } else {
        smooth_step((t - SHELL_SUPPORT_HI) / (WIDE_SUPPORT_HI - SHELL_SUPPORT_HI))
    }
}

/// Validate the oscillation exponent `0 < γ < 1`.
pub fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma.is_finite() && gamma > 0.0 && gamma < 1.0) {
        return Err(Error::parameter(format!(
            "oscillation exponent must satisfy 0 < γ < 1, got {gamma}"
        )));
    }
    Ok(())
}

/// Apply the global oscillating multiplier `e^{i|ξ|^γ} (1+|ξ|²)^{-b/2}`.
pub fn apply_global_oscillatory(f: &GridFunction, gamma: f64, b: f64) -> Result<GridFunction> {
    check_gamma(gamma)?;
    if !b.is_finite() {
        return Err(Error::parameter(format!("damping order must be finite, got {b}")));
    }
    apply_shifted_oscillatory(f, gamma, b, f.band_limit())
}

fn apply_shifted_oscillatory(
    f: &GridFunction,
    gamma: f64,
    b: f64,
    band: Option<BandLimit>,
) -> Result<GridFunction> {
    super::multiplier::apply_multiplier(
        f,
        |_, rho| {
            let damp = (1.0 + rho * rho).powf(-b / 2.0);
            Complex64::from_polar(damp, rho.powf(gamma))
        },
        band,
    )
}

/// Largest shell index representable on a grid: the window support
/// `1.55·2^k` must stay within the Nyquist ball.
pub fn max_shell_index(grid: Grid) -> u32 {
    let mut k = 0u32;
    while SHELL_SUPPORT_HI * 2f64.powi(k as i32 + 1) <= grid.max_freq() {
        k += 1;
    }
    k
}

fn check_shell(grid: Grid, k: u32) -> Result<()> {
    if SHELL_SUPPORT_HI * 2f64.powi(k as i32) > grid.max_freq() {
        return Err(Error::resolution(format!(
            "frequency shell {k} reaches |ξ| = {:.1}, beyond the Nyquist ball {};\
             the grid exponent must be at least {}",
            SHELL_SUPPORT_HI * 2f64.powi(k as i32),
            grid.max_freq(),
            k + 2
        )));
    }
    Ok(())
}

/// Apply the shell-restricted oscillating operator: multiplier
/// `e^{i|ξ|^γ} · w(2^{-k}|ξ|)` with the shell window `w`.
pub fn apply_shell_oscillatory(f: &GridFunction, gamma: f64, k: u32) -> Result<GridFunction> {
    check_gamma(gamma)?;
    check_shell(f.grid(), k)?;
    let scale = 2f64.powi(-(k as i32));
    super::multiplier::apply_multiplier(
        f,
        |_, rho| {
            let w = shell_window_profile(rho * scale);
            if w == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::from_polar(w, rho.powf(gamma))
            }
        },
        Some(BandLimit::ball(SHELL_SUPPORT_HI / scale)),
    )
}

/// Kernel of the shell-`k` oscillating operator on a grid.
pub fn shell_kernel(grid: Grid, gamma: f64, k: u32) -> Result<GridFunction> {
    check_gamma(gamma)?;
    check_shell(grid, k)?;
    let scale = 2f64.powi(-(k as i32));
    let spec: Vec<Complex64> = (0..grid.total())
        .map(|idx| {
            let rho = grid.freq_norm(idx);
            let w = shell_window_profile(rho * scale);
            if w == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::from_polar(w, rho.powf(gamma))
            }
        })
        .collect();
    GridFunction::from_spectrum(grid, spec, Some(BandLimit::ball(SHELL_SUPPORT_HI / scale)))
}

/// Stationary-phase window `[lo, hi]` (in space) where the shell-`k`
/// kernel concentrates: `|x| = γ|ξ|^{γ-1}/(2π)` over the window support.
pub fn stationary_window(gamma: f64, k: u32) -> (f64, f64) {
    let r = 2f64.powi(k as i32);
    let at = |t: f64| gamma * (t * r).powf(gamma - 1.0) / std::f64::consts::TAU;
    // γ < 1 makes the map decreasing in |ξ|.
    (at(SHELL_SUPPORT_HI), at(SHELL_SUPPORT_LO))
}
