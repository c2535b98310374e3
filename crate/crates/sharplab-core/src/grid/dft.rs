//! Discrete Fourier transforms behind the crate's normalization contract.
//!
//! Forward: `f̂(ξ) = 2^{-Jd} Σ_x f(x) e^{-2πi ξ·x}` (Riemann sum of the
//! continuum coefficient). Inverse: `f(x) = Σ_ξ f̂(ξ) e^{+2πi ξ·x}`.
//! Two-dimensional transforms are separable: all rows, then all columns.
//!
//! Planners are cached per thread; plans for a given length are reused.

use super::Grid;
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_rows(buf: &mut [Complex64], n: usize, forward: bool) {
    PLANNER.with(|planner| {
        let fft = {
            let mut p = planner.borrow_mut();
            if forward {
                p.plan_fft_forward(n)
            } else {
                p.plan_fft_inverse(n)
            }
        };
        for row in buf.chunks_exact_mut(n) {
            fft.process(row);
        }
    });
}

fn transpose(buf: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); buf.len()];
    for i in 0..n {
        for k in 0..n {
            out[k * n + i] = buf[i * n + k];
        }
    }
    out
}

fn transform(grid: Grid, data: &[Complex64], forward: bool) -> Vec<Complex64> {
    let n = grid.n();
    let mut buf = data.to_vec();
    match grid.d() {
        1 => fft_rows(&mut buf, n, forward),
        2 => {
            fft_rows(&mut buf, n, forward);
            let mut t = transpose(&buf, n);
            fft_rows(&mut t, n, forward);
            buf = transpose(&t, n);
        }
        _ => unreachable!("grid dimension is validated at construction"),
    }
    buf
}

/// Forward transform: samples → spectrum (includes the `2^{-Jd}` weight).
pub fn forward(grid: Grid, samples: &[Complex64]) -> Vec<Complex64> {
    debug_assert_eq!(samples.len(), grid.total());
    let mut out = transform(grid, samples, true);
    let w = grid.cell_measure();
    for c in &mut out {
        *c *= w;
    }
    out
}

/// Inverse transform: spectrum → samples (unweighted exponential sum).
pub fn inverse(grid: Grid, spectrum: &[Complex64]) -> Vec<Complex64> {
    debug_assert_eq!(spectrum.len(), grid.total());
    transform(grid, spectrum, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridFunction;
    use rand_chacha::ChaCha12Rng;
    use rand_core::{RngCore, SeedableRng};
    use std::f64::consts::TAU;

    fn uniform(rng: &mut ChaCha12Rng) -> f64 {
        (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn random_samples(n: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| Complex64::new(2.0 * uniform(&mut rng) - 1.0, 2.0 * uniform(&mut rng) - 1.0))
            .collect()
    }

    #[test]
    fn constant_function_transforms_to_delta_at_zero() {
        for (d, j) in [(1u8, 6u32), (2, 4)] {
            let g = Grid::new(d, j).unwrap();
            let f = GridFunction::from_real(g, vec![1.0; g.total()]).unwrap();
            let spec = f.spectrum();
            assert!((spec[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            for c in &spec[1..] {
                assert!(c.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn pure_exponential_transforms_to_unit_delta() {
        let g = Grid::new(1, 5).unwrap();
        let n = g.n();
        for xi in [3i64, -5, (n / 2) as i64] {
            let samples: Vec<Complex64> = (0..n)
                .map(|i| Complex64::from_polar(1.0, TAU * xi as f64 * i as f64 / n as f64))
                .collect();
            let f = GridFunction::from_samples(g, samples).unwrap();
            let spec = f.spectrum();
            let at = g.axis_index(xi).unwrap();
            for (idx, c) in spec.iter().enumerate() {
                let expect = if idx == at { 1.0 } else { 0.0 };
                assert!(
                    (c - Complex64::new(expect, 0.0)).norm() < 1e-12,
                    "ξ = {xi}, idx = {idx}"
                );
            }
        }
    }

    #[test]
    fn pure_exponential_2d() {
        let g = Grid::new(2, 4).unwrap();
        let n = g.n();
        let (a, b) = (3i64, -2i64);
        let mut samples = vec![Complex64::default(); g.total()];
        for i0 in 0..n {
            for i1 in 0..n {
                let phase = TAU * (a as f64 * i0 as f64 + b as f64 * i1 as f64) / n as f64;
                samples[i0 * n + i1] = Complex64::from_polar(1.0, phase);
            }
        }
        let f = GridFunction::from_samples(g, samples).unwrap();
        let spec = f.spectrum();
        let at = g.index_of([g.axis_index(a).unwrap(), g.axis_index(b).unwrap()]);
        for (idx, c) in spec.iter().enumerate() {
            let expect = if idx == at { 1.0 } else { 0.0 };
            assert!((c - Complex64::new(expect, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn round_trip_is_identity() {
        for (d, j, seed) in [(1u8, 8u32, 7u64), (2, 5, 8)] {
            let g = Grid::new(d, j).unwrap();
            let samples = random_samples(g.total(), seed);
            let spec = forward(g, &samples);
            let back = inverse(g, &spec);
            let err = samples
                .iter()
                .zip(back.iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            assert!(err <= 1e-10, "round-trip error {err}");
        }
    }

    #[test]
    fn parseval_identity() {
        for (d, j) in [(1u8, 7u32), (2, 4)] {
            let g = Grid::new(d, j).unwrap();
            let samples = random_samples(g.total(), 11);
            let spec = forward(g, &samples);
            let lhs: f64 = spec.iter().map(|c| c.norm_sqr()).sum();
            let rhs: f64 = g.cell_measure() * samples.iter().map(|c| c.norm_sqr()).sum::<f64>();
            assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
        }
    }

    #[test]
    fn convolution_matches_direct_sum() {
        for (d, j) in [(1u8, 5u32), (2, 4)] {
            let g = Grid::new(d, j).unwrap();
            let n = g.n();
            let fa = GridFunction::from_samples(g, random_samples(g.total(), 21)).unwrap();
            let fb = GridFunction::from_samples(g, random_samples(g.total(), 22)).unwrap();
            let conv = fa.convolve(&fb).unwrap();
            // Direct O(N²) convolution oracle.
            let w = g.cell_measure();
            let mut direct = vec![Complex64::default(); g.total()];
            for x in 0..g.total() {
                let xa = g.axes_of(x);
                let mut acc = Complex64::default();
                for y in 0..g.total() {
                    let ya = g.axes_of(y);
                    let diff = [(xa[0] + n - ya[0] % n).rem_euclid(n), (xa[1] + n - ya[1] % n).rem_euclid(n)];
                    let gi = if d == 1 { diff[0] % n } else { g.index_of([diff[0] % n, diff[1] % n]) };
                    acc += fa.samples()[y] * fb.samples()[gi];
                }
                direct[x] = acc * w;
            }
            let err = conv
                .samples()
                .iter()
                .zip(direct.iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            assert!(err <= 1e-10, "d={d} convolution error {err}");
        }
    }

    #[test]
    fn from_spectrum_preserves_structural_zeros() {
        let g = Grid::new(1, 6).unwrap();
        let mut spec = vec![Complex64::default(); g.total()];
        spec[g.axis_index(3).unwrap()] = Complex64::new(0.5, -0.25);
        spec[g.axis_index(-7).unwrap()] = Complex64::new(0.1, 0.0);
        let mut f = GridFunction::from_spectrum(g, spec.clone(), None).unwrap();
        // The cached spectrum is bit-identical to what was supplied.
        assert_eq!(f.spectrum(), spec.as_slice());
        assert!(f.verify_band_limit(crate::grid::BandLimit::ball(7.0)).is_ok());
        assert!(f.verify_band_limit(crate::grid::BandLimit::ball(5.0)).is_err());
        assert!(f.verify_band_limit(crate::grid::BandLimit::annulus(7.0)).is_err());
    }
}
