//! The discretized torus: grid geometry, sampled functions, and spectra.
//!
//! The domain is the periodic cube `[0,1)^d` with `d ∈ {1, 2}`, sampled at
//! `2^J` equispaced points per axis (`4 ≤ J ≤ 26`), spacing `2^{-J}`.
//! Frequencies are the integer lattice points in `(-2^{J-1}, 2^{J-1}]^d`;
//! storage index `i` on an axis maps to the frequency `i` when `i ≤ 2^{J-1}`
//! and to `i - 2^J` otherwise, so the positive Nyquist frequency `+2^{J-1}`
//! is included. Two-dimensional data is row-major: linear index
//! `idx = i0 * n + i1` where `i0` indexes the first axis.
//!
//! Normalization contract (chosen once, used everywhere):
//! - forward transform: `f̂(ξ) = 2^{-Jd} Σ_x f(x) e^{-2πi ξ·x}` — the Riemann
//!   sum of the continuum Fourier coefficient, so the constant function `1`
//!   has `f̂(0) = 1`;
//! - inverse transform: `f(x) = Σ_ξ f̂(ξ) e^{+2πi ξ·x}`;
//! - Parseval: `Σ_ξ |f̂(ξ)|² = 2^{-Jd} Σ_x |f(x)|² = ‖f‖₂²`;
//! - convolution `(f∗g)(x) = 2^{-Jd} Σ_y f(y) g(x-y)` has spectrum `f̂·ĝ`
//!   exactly (the `2^{-Jd}` quadrature weight cancels the lattice size).

pub mod cubes;
pub mod dft;
pub mod norms;

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::{Arc, OnceLock};

/// Smallest admissible grid exponent.
pub const MIN_GRID_EXP: u32 = 4;
/// Largest admissible grid exponent (per-axis point count `2^J`).
pub const MAX_GRID_EXP: u32 = 26;

/// Relative tolerance used when verifying that a spectrum vanishes where a
/// claimed band limit says it must.
pub const BAND_VERIFY_REL_TOL: f64 = 1e-9;

/// Geometry of the sampled torus: dimension `d` and per-axis exponent `J`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Grid {
    d: u8,
    j: u32,
}

impl Grid {
    /// Create a grid, validating `d ∈ {1,2}` and `4 ≤ J ≤ 26`.
    pub fn new(d: u8, j: u32) -> Result<Self> {
        if d != 1 && d != 2 {
            return Err(Error::parameter(format!("dimension must be 1 or 2, got {d}")));
        }
        if !(MIN_GRID_EXP..=MAX_GRID_EXP).contains(&j) {
            return Err(Error::parameter(format!(
                "grid exponent must satisfy {MIN_GRID_EXP} <= J <= {MAX_GRID_EXP}, got {j}"
            )));
        }
        if d == 2 && j > 13 {
            return Err(Error::resolution(format!(
                "two-dimensional grids are capped at J = 13 (2^{} samples already); got J = {j}",
                2 * 13
            )));
        }
        Ok(Grid { d, j })
    }

    /// Dimension (1 or 2).
    pub fn d(&self) -> u8 {
        self.d
    }

    /// Per-axis exponent `J`.
    pub fn j(&self) -> u32 {
        self.j
    }

    /// Points per axis, `n = 2^J`.
    pub fn n(&self) -> usize {
        1usize << self.j
    }

    /// Total sample count, `n^d`.
    pub fn total(&self) -> usize {
        self.n().pow(self.d as u32)
    }

    /// Grid spacing `2^{-J}`.
    pub fn spacing(&self) -> f64 {
        (self.n() as f64).recip()
    }

    /// Quadrature weight for one sample, `2^{-Jd}`.
    pub fn cell_measure(&self) -> f64 {
        (self.total() as f64).recip()
    }

    /// Map an axis storage index to its frequency.
    pub fn axis_freq(&self, i: usize) -> i64 {
        let n = self.n();
        debug_assert!(i < n);
        if i <= n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// Map a frequency back to its axis storage index.
    ///
    /// Accepts frequencies in `(-2^{J-1}, 2^{J-1}]`.
    pub fn axis_index(&self, xi: i64) -> Result<usize> {
        let half = (self.n() / 2) as i64;
        if xi > half || xi <= -half {
            return Err(Error::resolution(format!(
                "frequency {xi} outside representable range ({}, {half}]",
                -half
            )));
        }
        Ok(if xi >= 0 { xi as usize } else { (xi + self.n() as i64) as usize })
    }

    /// Decompose a linear sample index into per-axis indices.
    /// For `d = 1` the second entry is zero.
    pub fn axes_of(&self, idx: usize) -> [usize; 2] {
        if self.d == 1 {
            [idx, 0]
        } else {
            let n = self.n();
            [idx / n, idx % n]
        }
    }

    /// Compose per-axis indices into a linear sample index.
    pub fn index_of(&self, axes: [usize; 2]) -> usize {
        if self.d == 1 {
            axes[0]
        } else {
            axes[0] * self.n() + axes[1]
        }
    }

    /// Frequency vector of a linear spectrum index (second entry zero in 1-D).
    pub fn freq_of(&self, idx: usize) -> [i64; 2] {
        let ax = self.axes_of(idx);
        if self.d == 1 {
            [self.axis_freq(ax[0]), 0]
        } else {
            [self.axis_freq(ax[0]), self.axis_freq(ax[1])]
        }
    }

    /// Euclidean norm of the frequency vector at a linear spectrum index.
    pub fn freq_norm(&self, idx: usize) -> f64 {
        let f = self.freq_of(idx);
        ((f[0] * f[0] + f[1] * f[1]) as f64).sqrt()
    }

    /// Coordinates of the sample at a linear index (second entry zero in 1-D).
    pub fn point_of(&self, idx: usize) -> [f64; 2] {
        let ax = self.axes_of(idx);
        let h = self.spacing();
        [ax[0] as f64 * h, if self.d == 2 { ax[1] as f64 * h } else { 0.0 }]
    }

    /// Largest representable Euclidean frequency magnitude, `2^{J-1}`.
    pub fn max_freq(&self) -> f64 {
        (self.n() / 2) as f64
    }
}

/// Periodic distance between two coordinates in `[0,1)`.
pub fn periodic_dist_1d(a: f64, b: f64) -> f64 {
    let mut t = (a - b).rem_euclid(1.0);
    if t > 0.5 {
        t = 1.0 - t;
    }
    t
}

/// A claimed spectral support: the ball `|ξ| ≤ r`, or the closed annulus
/// `r/2 ≤ |ξ| ≤ r` when `annulus` is set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandLimit {
    /// Outer radius of the spectral support.
    pub r: f64,
    /// Whether the support is additionally confined to `|ξ| ≥ r/2`.
    pub annulus: bool,
}

impl BandLimit {
    /// Ball `|ξ| ≤ r`.
    pub fn ball(r: f64) -> Self {
        BandLimit { r, annulus: false }
    }

    /// Annulus `r/2 ≤ |ξ| ≤ r`.
    pub fn annulus(r: f64) -> Self {
        BandLimit { r, annulus: true }
    }
}

/// A complex-valued function sampled on a [`Grid`], with a lazily computed
/// and cached spectrum and an optional verified band limit.
///
/// Cloning is cheap (the sample and spectrum buffers are shared).
#[derive(Clone, Debug)]
pub struct GridFunction {
    grid: Grid,
    samples: Arc<[Complex64]>,
    spectrum: OnceLock<Arc<[Complex64]>>,
    band: Option<BandLimit>,
}

impl GridFunction {
    /// Wrap a sample buffer. Length must equal `grid.total()`.
    pub fn from_samples(grid: Grid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.total() {
            return Err(Error::parameter(format!(
                "sample buffer has {} entries, grid needs {}",
                samples.len(),
                grid.total()
            )));
        }
        Ok(GridFunction { grid, samples: samples.into(), spectrum: OnceLock::new(), band: None })
    }

    /// Wrap a real sample buffer.
    pub fn from_real(grid: Grid, samples: Vec<f64>) -> Result<Self> {
        Self::from_samples(grid, samples.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
    }

    /// Build a function from its spectrum (inverse transform is performed
    /// eagerly; the given spectrum is cached exactly, preserving structural
    /// zeros). The optional band limit is recorded but not verified — use
    /// [`GridFunction::verify_band_limit`] for that.
    pub fn from_spectrum(grid: Grid, spectrum: Vec<Complex64>, band: Option<BandLimit>) -> Result<Self> {
        if spectrum.len() != grid.total() {
            return Err(Error::parameter(format!(
                "spectrum buffer has {} entries, grid needs {}",
                spectrum.len(),
                grid.total()
            )));
        }
        let samples = dft::inverse(grid, &spectrum);
        let f = GridFunction {
            grid,
            samples: samples.into(),
            spectrum: OnceLock::new(),
            band,
        };
        let _ = f.spectrum.set(spectrum.into());
        Ok(f)
    }

    /// The grid this function lives on.
    pub fn grid(&self) -> Grid {
        self.grid
    }

    /// Sample values in storage order.
    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// The spectrum, computed on first use and cached.
    pub fn spectrum(&self) -> &[Complex64] {
        self.spectrum.get_or_init(|| dft::forward(self.grid, &self.samples).into())
    }

    /// The recorded band limit, if any.
    pub fn band_limit(&self) -> Option<BandLimit> {
        self.band
    }

    /// Record a band limit without verifying it.
    pub fn with_band_limit(mut self, band: BandLimit) -> Self {
        self.band = Some(band);
        self
    }

    /// Verify that the spectrum vanishes (relative to its largest
    /// coefficient) outside the claimed support, then record the claim.
    ///
    /// "Vanishes" means `|f̂(ξ)| ≤ 1e-9 · max_ξ |f̂|` for every `ξ` outside
    /// the ball `|ξ| ≤ r` (and, for an annulus claim, also for `|ξ| < r/2`).
    pub fn verify_band_limit(&mut self, band: BandLimit) -> Result<()> {
        let spec = self.spectrum();
        let max_mag = spec.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
        if max_mag == 0.0 {
            self.band = Some(band);
            return Ok(());
        }
        let tol = BAND_VERIFY_REL_TOL * max_mag;
        for (idx, c) in spec.iter().enumerate() {
            let rho = self.grid.freq_norm(idx);
            let outside = rho > band.r || (band.annulus && rho < band.r / 2.0);
            if outside && c.norm() > tol {
                let f = self.grid.freq_of(idx);
                return Err(Error::construction(format!(
                    "band limit violated: |f̂({},{})| = {:.3e} at |ξ| = {:.3} exceeds {:.3e} \
                     (claimed support: {}|ξ| <= {})",
                    f[0],
                    f[1],
                    c.norm(),
                    rho,
                    tol,
                    if band.annulus { format!("{} <= ", band.r / 2.0) } else { String::new() },
                    band.r
                )));
            }
        }
        self.band = Some(band);
        Ok(())
    }

    /// Pointwise map of the samples (drops any cached spectrum / band claim).
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        let samples: Vec<Complex64> = self.samples.iter().map(|&c| f(c)).collect();
        GridFunction {
            grid: self.grid,
            samples: samples.into(),
            spectrum: OnceLock::new(),
            band: None,
        }
    }

    /// Pointwise magnitudes of the samples.
    pub fn abs_samples(&self) -> Vec<f64> {
        self.samples.iter().map(|c| c.norm()).collect()
    }

    /// Exact spectral convolution `(f∗g)(x) = 2^{-Jd} Σ_y f(y) g(x-y)`.
    pub fn convolve(&self, other: &GridFunction) -> Result<GridFunction> {
        if self.grid != other.grid {
            return Err(Error::parameter("convolution operands live on different grids".to_string()));
        }
        let a = self.spectrum();
        let b = other.spectrum();
        let prod: Vec<Complex64> = a.iter().zip(b.iter()).map(|(x, y)| x * y).collect();
        let band = match (self.band, other.band) {
            (Some(x), Some(y)) => Some(BandLimit::ball(x.r.min(y.r))),
            (Some(x), None) => Some(BandLimit::ball(x.r)),
            (None, Some(y)) => Some(BandLimit::ball(y.r)),
            (None, None) => None,
        };
        GridFunction::from_spectrum(self.grid, prod, band)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn grid_validation() {
        assert!(Grid::new(1, 4).is_ok());
        assert!(Grid::new(2, 10).is_ok());
        assert!(Grid::new(3, 8).is_err());
        assert!(Grid::new(0, 8).is_err());
        assert!(Grid::new(1, 3).is_err());
        assert!(Grid::new(1, 27).is_err());
        assert!(Grid::new(2, 14).is_err());
    }

    #[test]
    fn frequency_mapping_includes_positive_nyquist() {
        let g = Grid::new(1, 4).unwrap(); // n = 16
        let freqs: Vec<i64> = (0..16).map(|i| g.axis_freq(i)).collect();
        assert_eq!(freqs, vec![0, 1, 2, 3, 4, 5, 6, 7, 8, -7, -6, -5, -4, -3, -2, -1]);
        for i in 0..16 {
            assert_eq!(g.axis_index(g.axis_freq(i)).unwrap(), i);
        }
        assert!(g.axis_index(9).is_err());
        assert!(g.axis_index(-8).is_err());
    }

    #[test]
    fn two_dimensional_layout_is_row_major() {
        let g = Grid::new(2, 4).unwrap();
        let idx = g.index_of([3, 5]);
        assert_eq!(idx, 3 * 16 + 5);
        assert_eq!(g.axes_of(idx), [3, 5]);
        assert_eq!(g.freq_of(g.index_of([9, 1])), [-7, 1]);
        let p = g.point_of(g.index_of([2, 8]));
        assert!((p[0] - 2.0 / 16.0).abs() < 1e-15);
        assert!((p[1] - 8.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn periodic_distance_wraps() {
        assert!((periodic_dist_1d(0.1, 0.9) - 0.2).abs() < 1e-15);
        assert!((periodic_dist_1d(0.9, 0.1) - 0.2).abs() < 1e-15);
        assert!((periodic_dist_1d(0.25, 0.75) - 0.5).abs() < 1e-15);
        assert_eq!(periodic_dist_1d(0.3, 0.3), 0.0);
    }

    proptest! {
        #[test]
        fn axis_freq_round_trips(j in 4u32..10, i in 0usize..1024) {
            let g = Grid::new(1, j).unwrap();
            let i = i % g.n();
            prop_assert_eq!(g.axis_index(g.axis_freq(i)).unwrap(), i);
        }

        #[test]
        fn linear_index_round_trips(j in 4u32..8, a in 0usize..256, b in 0usize..256) {
            let g = Grid::new(2, j).unwrap();
            let axes = [a % g.n(), b % g.n()];
            prop_assert_eq!(g.axes_of(g.index_of(axes)), axes);
        }
    }
}
