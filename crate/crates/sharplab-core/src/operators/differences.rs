//! Finite differences along grid offsets and the pointwise smoothness
//! modulus built from them.
//!
//! The order-`m` forward difference with step `h` is
//! `Δ_h^m f(x) = Σ_{ν=0}^m (-1)^{m-ν} C(m,ν) f(x + νh)`; the reduced
//! variant omits the `ν = 0` term: `Δ̃_h^m f = Δ_h^m f - (-1)^m f`.
//! Steps are grid offsets (integer cell shifts); arbitrary real steps snap
//! to the nearest grid offset, and the snapped value is reported.
//!
//! The pointwise smoothness modulus discretizes
//! `(∫_0^1 [t^{-σ} sup_{|h|≤t} |Δ_h^m f(x)|]^q dt/t)^{1/q}` by its dyadic
//! quadrature `(Σ_l [2^{lσ} S_l(x)]^q · ln 2)^{1/q}` with
//! `S_l(x) = sup_{0<|h|≤2^{-l}} |Δ_h^m f(x)|` over grid offsets, where
//! `|h|` is the periodic Euclidean length of the offset.

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};
use num_complex::Complex64;
use std::ops::RangeInclusive;

/// Validate a difference order `1 ≤ m ≤ 8`.
pub fn check_order(m: u32) -> Result<()> {
    if !(1..=8).contains(&m) {
        return Err(Error::parameter(format!(
            "difference order must satisfy 1 <= m <= 8, got {m}"
        )));
    }
    Ok(())
}

/// Snap a real step vector to the nearest grid offset (in cells).
/// Returns the offset and the snapped step it represents.
pub fn snap_step(grid: Grid, h: [f64; 2]) -> ([i64; 2], [f64; 2]) {
    let n = grid.n() as f64;
    let snap = |t: f64| (t * n).round() as i64;
    let cells = [snap(h[0]), if grid.d() == 2 { snap(h[1]) } else { 0 }];
    ([cells[0], cells[1]], [cells[0] as f64 / n, cells[1] as f64 / n])
}

/// Periodic Euclidean length of an offset given in cells.
pub fn offset_length(grid: Grid, cells: [i64; 2]) -> f64 {
    let n = grid.n() as i64;
    let wrap = |c: i64| {
        let r = c.rem_euclid(n);
        r.min(n - r) as f64
    };
    let h = grid.spacing();
    match grid.d() {
        1 => wrap(cells[0]) * h,
        _ => {
            let (a, b) = (wrap(cells[0]) * h, wrap(cells[1]) * h);
            (a * a + b * b).sqrt()
        }
    }
}

fn binomial(m: u32, v: u32) -> f64 {
    let mut c = 1.0f64;
    for i in 0..v {
        c = c * (m - i) as f64 / (i + 1) as f64;
    }
    c
}

fn shifted_index(grid: Grid, idx: usize, cells: [i64; 2], steps: i64) -> usize {
    let n = grid.n() as i64;
    let ax = grid.axes_of(idx);
    let a = (ax[0] as i64 + steps * cells[0]).rem_euclid(n) as usize;
    if grid.d() == 1 {
        a
    } else {
        let b = (ax[1] as i64 + steps * cells[1]).rem_euclid(n) as usize;
        grid.index_of([a, b])
    }
}

fn difference_impl(f: &GridFunction, m: u32, cells: [i64; 2], drop_zero_term: bool) -> Result<GridFunction> {
    check_order(m)?;
    let grid = f.grid();
    let src = f.samples();
    let start = if drop_zero_term { 1 } else { 0 };
    let coeffs: Vec<f64> = (start..=m)
        .map(|v| if (m - v) % 2 == 0 { binomial(m, v) } else { -binomial(m, v) })
        .collect();
    let mut out = vec![Complex64::default(); grid.total()];
    for (pos, v) in (start..=m).enumerate() {
        let c = coeffs[pos];
        for idx in 0..grid.total() {
            out[idx] += src[shifted_index(grid, idx, cells, v as i64)] * c;
        }
    }
    GridFunction::from_samples(grid, out)
}

/// Order-`m` forward difference along a grid offset (in cells).
pub fn difference(f: &GridFunction, m: u32, cells: [i64; 2]) -> Result<GridFunction> {
    difference_impl(f, m, cells, false)
}

/// Reduced difference `Δ̃_h^m f = Δ_h^m f - (-1)^m f` (the `ν = 0` term of
/// the binomial sum is dropped).
pub fn reduced_difference(f: &GridFunction, m: u32, cells: [i64; 2]) -> Result<GridFunction> {
    difference_impl(f, m, cells, true)
}

/// All nonzero grid offsets of periodic length ≤ `radius`, in 1-D as signed
/// cell counts, in 2-D as cell pairs within the closed Euclidean ball.
fn offsets_within(grid: Grid, radius: f64) -> Vec<[i64; 2]> {
    let n = grid.n() as i64;
    let h = grid.spacing();
    let max_cells = ((radius / h).floor() as i64).min(n / 2);
    let mut out = Vec::new();
    match grid.d() {
        1 => {
            for c in 1..=max_cells {
                out.push([c, 0]);
                // The antipodal offset n-c duplicates distance c; keep both
                // signs only while they are distinct modulo n.
                if c != n - c {
                    out.push([-c, 0]);
                }
            }
        }
        _ => {
            for a in -max_cells..=max_cells {
                for b in -max_cells..=max_cells {
                    if (a, b) == (0, 0) {
                        continue;
                    }
                    let len = ((a * a + b * b) as f64).sqrt() * h;
                    if len <= radius + 1e-12 {
                        out.push([a, b]);
                    }
                }
            }
        }
    }
    out
}

/// Pointwise smoothness modulus: dyadic quadrature over the levels in
/// `levels` of the running sup of `|Δ_h^m f|` over offsets `0 < |h| ≤ 2^{-l}`.
///
/// Cost note: each offset's difference array is visited once (the sups are
/// accumulated from the finest annulus outward), so the total work is
/// `O(N · #offsets · m)`.
pub fn smoothness_modulus(
    f: &GridFunction,
    sigma: f64,
    q: f64,
    m: u32,
    levels: RangeInclusive<u32>,
) -> Result<GridFunction> {
    check_order(m)?;
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::parameter(format!("smoothness order must be > 0, got {sigma}")));
    }
    crate::grid::norms::check_exponent(q)?;
    let grid = f.grid();
    let (l_lo, l_hi) = (*levels.start(), *levels.end());
    if l_lo > l_hi {
        return Err(Error::parameter("empty level range".to_string()));
    }
    if l_hi > grid.j() {
        return Err(Error::resolution(format!(
            "modulus level {l_hi} exceeds grid exponent {}: no offsets of length <= 2^-{l_hi} exist",
            grid.j()
        )));
    }

    // Group offsets by the coarsest level whose ball still contains them:
    // offset length ℓ belongs to group l = floor(-log2 ℓ) clamped to range.
    let all = offsets_within(grid, 0.5f64.powi(l_lo as i32));
    let mut groups: Vec<Vec<[i64; 2]>> = vec![Vec::new(); (l_hi - l_lo + 1) as usize];
    for cells in all {
        let len = offset_length(grid, cells);
        let mut level = (-len.log2()).floor() as i64;
        if level < l_lo as i64 {
            level = l_lo as i64;
        }
        if level > l_hi as i64 {
            level = l_hi as i64;
        }
        // Guard the boundary: the group's level must truly admit the offset.
        while (level as u32) > l_lo && len > 0.5f64.powi(level as i32) + 1e-15 {
            level -= 1;
        }
        groups[(level - l_lo as i64) as usize].push(cells);
    }

    let total = grid.total();
    let mut running_sup = vec![0.0f64; total];
    let mut accum = vec![0.0f64; total];
    let ln2 = std::f64::consts::LN_2;
    // Finest level first: its offsets belong to every coarser ball too.
    for l in (l_lo..=l_hi).rev() {
        for cells in &groups[(l - l_lo) as usize] {
            let diff = difference(f, m, *cells)?;
            for (sup, v) in running_sup.iter_mut().zip(diff.samples()) {
                let mag = v.norm();
                if mag > *sup {
                    *sup = mag;
                }
            }
        }
        let weight = 2f64.powf(l as f64 * sigma);
        for (acc, sup) in accum.iter_mut().zip(running_sup.iter()) {
            if *sup > 0.0 {
                *acc += (weight * *sup).powf(q) * ln2;
            }
        }
    }
    let out: Vec<f64> = accum.into_iter().map(|v| v.powf(q.recip())).collect();
    GridFunction::from_real(grid, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn cosine(grid: Grid, freq: f64) -> GridFunction {
        let n = grid.n();
        let samples: Vec<f64> = (0..n).map(|i| (TAU * freq * i as f64 / n as f64).cos()).collect();
        GridFunction::from_real(grid, samples).unwrap()
    }

    #[test]
    fn first_difference_matches_definition() {
        let g = Grid::new(1, 4).unwrap();
        let f = cosine(g, 1.0);
        let d = difference(&f, 1, [3, 0]).unwrap();
        for idx in 0..g.total() {
            let want = f.samples()[(idx + 3) % 16] - f.samples()[idx];
            assert!((d.samples()[idx] - want).norm() < 1e-14);
        }
    }

    #[test]
    fn second_difference_annihilates_affine_phases() {
        // Δ_h² of a single exponential e^{2πiξx} has magnitude
        // |e^{2πiξh} - 1|² |f|; for the constant it is 0.
        let g = Grid::new(1, 5).unwrap();
        let ones = GridFunction::from_real(g, vec![1.0; 32]).unwrap();
        let d = difference(&ones, 2, [5, 0]).unwrap();
        assert!(d.samples().iter().all(|c| c.norm() < 1e-14));
    }

    #[test]
    fn reduced_difference_drops_only_the_zero_term() {
        let g = Grid::new(1, 5).unwrap();
        let f = cosine(g, 3.0);
        let m = 2u32;
        let full = difference(&f, m, [4, 0]).unwrap();
        let reduced = reduced_difference(&f, m, [4, 0]).unwrap();
        for idx in 0..g.total() {
            // Δ̃ = Δ - (-1)^m f  (m even here, so Δ̃ = Δ - f).
            let want = full.samples()[idx] - f.samples()[idx];
            assert!((reduced.samples()[idx] - want).norm() < 1e-13);
        }
    }

    #[test]
    fn snapping_rounds_to_nearest_cell() {
        let g = Grid::new(1, 4).unwrap(); // spacing 1/16
        let (cells, snapped) = snap_step(g, [0.2, 0.0]);
        assert_eq!(cells, [3, 0]); // 0.2·16 = 3.2 → 3
        assert!((snapped[0] - 3.0 / 16.0).abs() < 1e-15);
        let (cells2, _) = snap_step(g, [-0.22, 0.0]);
        assert_eq!(cells2, [-4, 0]); // -3.52 → -4
    }

    #[test]
    fn offset_lengths_are_periodic() {
        let g = Grid::new(1, 4).unwrap();
        assert!((offset_length(g, [3, 0]) - 3.0 / 16.0).abs() < 1e-15);
        assert!((offset_length(g, [-3, 0]) - 3.0 / 16.0).abs() < 1e-15);
        assert!((offset_length(g, [15, 0]) - 1.0 / 16.0).abs() < 1e-15);
        let g2 = Grid::new(2, 4).unwrap();
        assert!((offset_length(g2, [3, 4]) - 5.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn modulus_of_a_single_frequency_scales_with_sigma_weighting() {
        // For f(x) = cos(2πξx), |Δ_h¹ f| ≤ min(2, 2π ξ |h|)·1; the modulus is
        // finite and positive everywhere for σ < 1.
        let g = Grid::new(1, 8).unwrap();
        let f = cosine(g, 4.0);
        let mo = smoothness_modulus(&f, 0.5, 1.0, 1, 0..=8).unwrap();
        assert!(mo.samples().iter().all(|c| c.re > 0.0 && c.re.is_finite()));
    }

    #[test]
    fn modulus_vanishes_for_constants() {
        let g = Grid::new(1, 6).unwrap();
        let ones = GridFunction::from_real(g, vec![2.5; 64]).unwrap();
        let mo = smoothness_modulus(&ones, 0.7, 2.0, 2, 0..=6).unwrap();
        assert!(mo.samples().iter().all(|c| c.re == 0.0));
    }

    #[test]
    fn modulus_grouping_matches_direct_per_level_sups() {
        // Independent oracle: recompute each level's sup from scratch.
        let g = Grid::new(1, 6).unwrap();
        let f = cosine(g, 5.0);
        let (sigma, q, m) = (0.6, 1.5, 1u32);
        let fast = smoothness_modulus(&f, sigma, q, m, 2..=6).unwrap();
        let ln2 = std::f64::consts::LN_2;
        let mut acc = vec![0.0f64; g.total()];
        for l in 2..=6u32 {
            let radius = 0.5f64.powi(l as i32);
            let mut sup = vec![0.0f64; g.total()];
            for cells in offsets_within(g, radius) {
                let d = difference(&f, m, cells).unwrap();
                for (s, v) in sup.iter_mut().zip(d.samples()) {
                    *s = s.max(v.norm());
                }
            }
            let w = 2f64.powf(l as f64 * sigma);
            for (a, s) in acc.iter_mut().zip(sup.iter()) {
                if *s > 0.0 {
                    *a += (w * s).powf(q) * ln2;
                }
            }
        }
        for (idx, a) in acc.iter().enumerate() {
            let want = a.powf(q.recip());
            assert!(
                (fast.samples()[idx].re - want).abs() <= 1e-12 * want.max(1e-12),
                "idx {idx}: {} vs {want}",
                fast.samples()[idx].re
            );
        }
    }

    #[test]
    fn level_beyond_grid_is_a_resolution_error() {
        let g = Grid::new(1, 5).unwrap();
        let f = cosine(g, 2.0);
        assert!(smoothness_modulus(&f, 0.5, 1.0, 1, 0..=6).is_err());
        assert!(smoothness_modulus(&f, 0.5, 1.0, 1, 0..=5).is_ok());
    }
}
