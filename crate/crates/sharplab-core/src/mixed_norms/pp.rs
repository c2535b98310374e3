//! Discrete sampled-sum norms for band-limited functions: for an
//! appropriately band-limited `f`, the ℓ^q sum of one sample per dyadic
//! cube on a fine-enough mesh brackets `2^{ℓd/q}‖f‖_q` two-sidedly, no
//! matter which point of each cube is sampled. Also the windowed-integral
//! equivalent: `(∫ (sup or inf of |f| over balls of radius u·2^{-k})^q)^{1/q}`
//! brackets `‖f‖_q` for small enough window fraction `u`.

use crate::error::{Error, Result};
use crate::grid::cubes::{check_level, cube_sample_indices, cubes_at_level, DyadicCube};
use crate::grid::norms::{check_exponent, lp_norm_of_abs};
use crate::grid::GridFunction;
use crate::operators::differences::snap_step;
use crate::operators::maximal::{windowed_maximal, windowed_minimal};

/// How the sample point `x_Q` is chosen inside each mesh cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubeSampler {
    /// The cube's low corner.
    Corner,
    /// The cube's center (rounded down to the sample lattice).
    Center,
    /// The largest `|f|` over the cube's samples.
    MaxInCube,
    /// The smallest `|f|` over the cube's samples.
    MinInCube,
}

/// Outcome of a discrete sampled sum. `hypothesis_met` records whether `f`
/// carried a band-limit annotation within the ball `|ξ| ≤ 2^ℓ` — the
/// regime in which the bracketing theorem applies; the sum itself is
/// well-defined regardless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledSum {
    pub value: f64,
    pub hypothesis_met: bool,
}

/// `(Σ_{Q} |f(x_Q)|^q)^{1/q}` over the mesh of dyadic cubes of side
/// `2^{-(ℓ+m)}` translated by `shift`, with `x_Q ∈ Q` chosen by `sampler`.
///
/// The translate is realized by sampling `f` at `x_Q + shift` (snapped to
/// the grid), which is the same sum as over the shifted cube family.
/// Requires mesh level `ℓ + m ≤ J`.
pub fn pp_discrete_sum(
    f: &GridFunction,
    ell: u32,
    m: u32,
    q: f64,
    sampler: CubeSampler,
    shift: [f64; 2],
) -> Result<SampledSum> {
    check_exponent(q)?;
    let grid = f.grid();
    let mesh = ell + m;
    check_level(grid, mesh)?;
    let (shift_cells, _) = snap_step(grid, shift);
    let n = grid.n() as i64;
    let translate = |idx: usize| -> usize {
        if shift_cells == [0, 0] {
            return idx;
        }
        let ax = grid.axes_of(idx);
        let ia = (ax[0] as i64 + shift_cells[0]).rem_euclid(n) as usize;
        let ib = (ax[1] as i64 + shift_cells[1]).rem_euclid(n) as usize;
        grid.index_of([ia, ib])
    };
    let samples = f.samples();
    let sampled = |cube: &DyadicCube| -> f64 {
        match sampler {
            CubeSampler::Corner => {
                let (s0, _) = crate::grid::cubes::axis_sample_range(grid, cube, 0);
                let idx = if grid.d() == 1 {
                    s0
                } else {
                    let (s1, _) = crate::grid::cubes::axis_sample_range(grid, cube, 1);
                    grid.index_of([s0, s1])
                };
                samples[translate(idx)].norm()
            }
            CubeSampler::Center => {
                let half = (1usize << (grid.j() - cube.level)) / 2;
                let (s0, _) = crate::grid::cubes::axis_sample_range(grid, cube, 0);
                let idx = if grid.d() == 1 {
                    s0 + half
                } else {
                    let (s1, _) = crate::grid::cubes::axis_sample_range(grid, cube, 1);
                    grid.index_of([s0 + half, s1 + half])
                };
                samples[translate(idx)].norm()
            }
            CubeSampler::MaxInCube => cube_sample_indices(grid, cube)
                .into_iter()
                .map(|i| samples[translate(i)].norm())
                .fold(0.0, f64::max),
            CubeSampler::MinInCube => cube_sample_indices(grid, cube)
                .into_iter()
                .map(|i| samples[translate(i)].norm())
                .fold(f64::INFINITY, f64::min),
        }
    };
    let mut acc = 0.0f64;
    for cube in cubes_at_level(grid.d(), mesh) {
        let v = sampled(&cube);
        acc += if q == 1.0 { v } else { v.powf(q) };
    }
    let value = if q == 1.0 { acc } else { acc.powf(q.recip()) };
    let hypothesis_met = match f.band_limit() {
        Some(b) => b.r <= 2f64.powi(ell as i32) * (1.0 + 1e-12),
        None => false,
    };
    Ok(SampledSum { value, hypothesis_met })
}

/// Bracket ratio `(Σ_Q |f(x_Q)|^q)^{1/q} / (2^{ℓd/q}‖f‖_q)` at shift 0 —
/// the quantity the sampling theorem pins between two constants for
/// `f ∈ 𝓔(2^ℓ)`, whose two-sided stability the acceptance checks monitor.
pub fn pp_bracket_ratio(
    f: &GridFunction,
    ell: u32,
    m: u32,
    q: f64,
    sampler: CubeSampler,
) -> Result<f64> {
    let sum = pp_discrete_sum(f, ell, m, q, sampler, [0.0, 0.0])?.value;
    let d = f.grid().d() as f64;
    let norm = crate::grid::norms::lp_norm(f, q)?;
    if norm == 0.0 {
        return Err(Error::parameter("bracket ratio undefined for the zero function".to_string()));
    }
    Ok(sum / (2f64.powf(ell as f64 * d / q) * norm))
}

fn check_window_fraction(u: f64) -> Result<()> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::parameter(format!("window fraction must lie in (0,1), got {u}")));
    }
    Ok(())
}

/// `(∫ (sup_{|x-y| ≤ u·2^{-k}} |f(y)|)^q dx)^{1/q}`.
pub fn windowed_sup_lq(f: &GridFunction, k: u32, u: f64, q: f64) -> Result<f64> {
    check_window_fraction(u)?;
    check_exponent(q)?;
    let field = windowed_maximal(f, u * 2f64.powi(-(k as i32)))?;
    Ok(lp_norm_of_abs(f.grid(), &field.abs_samples(), q))
}

/// `(∫ (inf_{|x-y| ≤ u·2^{-k}} |f(y)|)^q dx)^{1/q}`.
pub fn windowed_inf_lq(f: &GridFunction, k: u32, u: f64, q: f64) -> Result<f64> {
    check_window_fraction(u)?;
    check_exponent(q)?;
    let field = windowed_minimal(f, u * 2f64.powi(-(k as i32)))?;
    Ok(lp_norm_of_abs(f.grid(), &field.abs_samples(), q))
}
