//! The concrete function families driven through the operators: smoothed
//! random cube fields, the deterministic nested-cube family, its weighted
//! Sobolev-scale variant, and the sparse oscillatory family.
//!
//! All randomness flows through the counter-based selector draws in
//! [`crate::constructions::bernoulli`], so every family is a pure function
//! of its parameters and seed, and members with distinct indices receive
//! independent selector fields even when they share a cube level.

use crate::constructions::bernoulli::{check_probability, cube_selector, sample_field};
use crate::constructions::mollifier::{Mollifier, MIN_SMOOTHING_RADIUS};
use crate::error::{Error, Result};
use crate::grid::cubes::{check_level, cubes_at_level};
use crate::grid::{BandLimit, Grid, GridFunction};
use crate::operators::oscillatory::{check_gamma, wide_window_profile, WIDE_SUPPORT_HI};
use num_complex::Complex64;
use std::ops::RangeInclusive;

/// Which construction produced a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// Mollifier-smoothed random cube fields at caller-chosen levels.
    RandomPeetre,
    /// The deterministic nested-cube family.
    Deterministic,
    /// Weighted smoothed random fields on a geometric level ladder.
    Sobolev,
    /// Sparse random spike trains under a wide low-pass profile.
    Oscillatory,
    /// Anything assembled by hand.
    Custom,
}

impl FamilyKind {
    /// Stable text tag (used by the serialization container).
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyKind::RandomPeetre => "random_peetre",
            FamilyKind::Deterministic => "deterministic",
            FamilyKind::Sobolev => "sobolev",
            FamilyKind::Oscillatory => "oscillatory",
            FamilyKind::Custom => "custom",
        }
    }

    /// Inverse of [`FamilyKind::as_str`].
    pub fn parse(tag: &str) -> Result<Self> {
        Ok(match tag {
            "random_peetre" => FamilyKind::RandomPeetre,
            "deterministic" => FamilyKind::Deterministic,
            "sobolev" => FamilyKind::Sobolev,
            "oscillatory" => FamilyKind::Oscillatory,
            "custom" => FamilyKind::Custom,
            other => return Err(Error::parameter(format!("unknown family kind tag {other:?}"))),
        })
    }
}

/// A finite family `{f_k}` of grid functions together with one positive
/// dilation scale `r_k` per member.
///
/// For the random and deterministic families the scale is the outer radius
/// of the member's verified spectral annulus; for the oscillatory family it
/// is the member's dyadic dilation parameter `2^k` (the verified spectral
/// band is then the ball of radius `1.95·2^k`).
#[derive(Clone, Debug)]
pub struct FunctionFamily {
    kind: FamilyKind,
    members: Vec<GridFunction>,
    scales: Vec<f64>,
}

impl FunctionFamily {
    /// Assemble a family, validating that members and scales pair up, the
    /// scales are positive, and all members share one grid.
    pub fn new(kind: FamilyKind, members: Vec<GridFunction>, scales: Vec<f64>) -> Result<Self> {
        if members.len() != scales.len() {
            return Err(Error::parameter(format!(
                "family has {} members but {} scales",
                members.len(),
                scales.len()
            )));
        }
        if let Some(bad) = scales.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
            return Err(Error::parameter(format!("family scales must be positive, got {bad}")));
        }
        if let Some(first) = members.first() {
            if members.iter().any(|m| m.grid() != first.grid()) {
                return Err(Error::parameter("family members live on different grids".to_string()));
            }
        }
        Ok(FunctionFamily { kind, members, scales })
    }

    /// Construction tag.
    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    /// The members, in family order.
    pub fn members(&self) -> &[GridFunction] {
        &self.members
    }

    /// One member.
    pub fn member(&self, k: usize) -> &GridFunction {
        &self.members[k]
    }

    /// The dilation scales, in family order.
    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// Whether the family has no members.
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Common grid of the members (`None` for an empty family).
    pub fn grid(&self) -> Option<Grid> {
        self.members.first().map(|m| m.grid())
    }

    /// Pointwise sum of the members. When every member carres a band
    /// annotation the sum is annotated with the ball of the largest radius.
    pub fn sum(&self) -> Result<GridFunction> {
        let grid = self
            .grid()
            .ok_or_else(|| Error::parameter("cannot sum an empty family".to_string()))?;
        let mut acc = vec![Complex64::new(0.0, 0.0); grid.total()];
        for m in &self.members {
            for (slot, s) in acc.iter_mut().zip(m.samples()) {
                *slot += s;
            }
        }
        let mut out = GridFunction::from_samples(grid, acc)?;
        let radii: Option<Vec<f64>> =
            self.members.iter().map(|m| m.band_limit().map(|b| b.r)).collect();
        if let Some(radii) = radii {
            let r_max = radii.into_iter().fold(0.0f64, f64::max);
            out = out.with_band_limit(BandLimit::ball(r_max));
        }
        Ok(out)
    }
}

fn check_member_level(grid: Grid, n: u32, m: u32) -> Result<()> {
    if n + 1 > grid.j() {
        return Err(Error::resolution(format!(
            "cube level {n} too fine for grid exponent {}: smoothed members need n <= J-1",
            grid.j()
        )));
    }
    if n < m + 2 {
        return Err(Error::resolution(format!(
            "cube level {n} with window exponent {m} gives smoothing radius \
             2^{} < {MIN_SMOOTHING_RADIUS}: need n >= M+2",
            n as i64 - m as i64
        )));
    }
    Ok(())
}

/// Smoothed random cube fields: member `k` is `η_{r_k} ∗ h_k` where `h_k`
/// is an independent Bernoulli(`a`) cube field at level `levels[k]` and
/// `r_k = 2^{levels[k]-M}`. Each member lands in the spectral annulus
/// `r_k/2 ≤ |ξ| ≤ r_k`.
///
/// Levels may repeat: members are keyed by their index, so two members at
/// the same level still receive independent selector fields.
pub fn smoothed_random_family(
    grid: Grid,
    levels: &[u32],
    a: f64,
    m: u32,
    seed: u64,
) -> Result<FunctionFamily> {
    if levels.is_empty() {
        return Err(Error::parameter("family needs at least one level".to_string()));
    }
    check_probability(a)?;
    let mo = Mollifier::build(grid.d(), m)?;
    for &n in levels {
        check_member_level(grid, n, m)?;
    }
    let mut members = Vec::with_capacity(levels.len());
    let mut scales = Vec::with_capacity(levels.len());
    for (k, &n) in levels.iter().enumerate() {
        let h = sample_field(grid, n, a, seed, k as u64)?;
        let r = 2f64.powi(n as i32 - m as i32);
        members.push(mo.smooth(&h, r)?);
        scales.push(r);
    }
    FunctionFamily::new(FamilyKind::RandomPeetre, members, scales)
}

/// The deterministic nested-cube field at one scale: the sum of the
/// indicators of the cubes
/// `[j_1·2^{-k+N}, j_1·2^{-k+N}+2^{-k-M}] × … × [j_d·2^{-k+N}, …]`
/// over `j ∈ {0, …, 2^{k-N}-1}^d` — one small cube of side `2^{-k-M}` in
/// the corner of each coarse cell of side `2^{-k+N}`. Exactly representable
/// on the grid when `k + M ≤ J`.
pub fn deterministic_field(grid: Grid, big_n: u32, m: u32, k: u32) -> Result<GridFunction> {
    if big_n == 0 {
        return Err(Error::parameter("sparsity exponent N must be >= 1".to_string()));
    }
    if k < big_n {
        return Err(Error::parameter(format!("scale k = {k} must be at least N = {big_n}")));
    }
    if k + m > grid.j() {
        return Err(Error::resolution(format!(
            "small cubes of side 2^-{} need grid exponent J >= {}, got {}",
            k + m,
            k + m,
            grid.j()
        )));
    }
    let j = grid.j();
    let coarse_step = 1usize << (j - k + big_n); // coarse cell side, in grid cells
    let side = 1usize << (j - k - m); // small cube side, in grid cells
    let count = 1usize << (k - big_n); // small cubes per axis
    let mut samples = vec![0.0f64; grid.total()];
    if grid.d() == 1 {
        for jj in 0..count {
            let start = jj * coarse_step;
            for cell in samples[start..start + side].iter_mut() {
                *cell = 1.0;
            }
        }
    } else {
        let n = grid.n();
        for j0 in 0..count {
            let r0 = j0 * coarse_step;
            for j1 in 0..count {
                let c0 = j1 * coarse_step;
                for row in r0..r0 + side {
                    for cell in samples[row * n + c0..row * n + c0 + side].iter_mut() {
                        *cell = 1.0;
                    }
                }
            }
        }
    }
    GridFunction::from_real(grid, samples)
}

/// The deterministic family: member `k` is `η_{2^k} ∗ h_k` over the given
/// range of scales, where `h_k` is [`deterministic_field`] — so each member
/// lands in the spectral annulus `2^{k-1} ≤ |ξ| ≤ 2^k`, while its support
/// keeps the fixed measure `2^{-(N+M)d}`.
pub fn deterministic_family(
    grid: Grid,
    big_n: u32,
    m: u32,
    k_range: RangeInclusive<u32>,
) -> Result<FunctionFamily> {
    if k_range.is_empty() {
        return Err(Error::parameter("scale range is empty".to_string()));
    }
    let mo = Mollifier::build(grid.d(), m)?;
    let mut members = Vec::new();
    let mut scales = Vec::new();
    for k in k_range {
        let h = deterministic_field(grid, big_n, m, k)?;
        let r = 2f64.powi(k as i32);
        members.push(mo.smooth(&h, r)?);
        scales.push(r);
    }
    FunctionFamily::new(FamilyKind::Deterministic, members, scales)
}

/// How many members [`sobolev_family`] builds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SobolevMode {
    /// All `2^{Nd}` members. The top cube level is then `R·2^{Nd}`, which
    /// grows doubly exponentially in `N` — infeasible beyond small `N`.
    Full,
    /// Only the first `k_cap` members (same levels and weights).
    Truncated { k_cap: u32 },
}

/// Weighted smoothed random fields on the geometric level ladder
/// `n_k = kR`: member `k` is `2^{-kRσ}·(η_{r_k} ∗ h_k)` with
/// `r_k = 2^{kR-M}` and selection probability `a = 2^{-Nd}`, for
/// `k = 1, …, 2^{Nd}` (or up to `k_cap` in truncated mode).
pub fn sobolev_family(
    grid: Grid,
    big_n: u32,
    big_r: u32,
    sigma: f64,
    m: u32,
    seed: u64,
    mode: SobolevMode,
) -> Result<FunctionFamily> {
    if big_n == 0 {
        return Err(Error::parameter("sparsity exponent N must be >= 1".to_string()));
    }
    if big_r == 0 {
        return Err(Error::parameter("level stride R must be >= 1".to_string()));
    }
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::parameter(format!(
            "smoothness exponent must be finite and >= 0, got {sigma}"
        )));
    }
    let full_count = 1u64 << (big_n as u64 * grid.d() as u64);
    let count = match mode {
        SobolevMode::Full => full_count,
        SobolevMode::Truncated { k_cap } => {
            if k_cap == 0 || k_cap as u64 > full_count {
                return Err(Error::parameter(format!(
                    "member cap must satisfy 1 <= cap <= 2^(Nd) = {full_count}, got {k_cap}"
                )));
            }
            k_cap as u64
        }
    };
    let top_level = big_r as u64 * count;
    if top_level + m as u64 + 1 > grid.j() as u64 {
        return Err(Error::resolution(format!(
            "top cube level {}·{} = {top_level} needs grid exponent J >= {}, got {}{}",
            big_r,
            count,
            top_level + m as u64 + 1,
            grid.j(),
            if matches!(mode, SobolevMode::Full) { "; cap the member count to fit" } else { "" }
        )));
    }
    let levels: Vec<u32> = (1..=count as u32).map(|k| k * big_r).collect();
    let a = 2f64.powi(-(big_n as i32 * grid.d() as i32));
    let base = smoothed_random_family(grid, &levels, a, m, seed)?;
    let mut members = Vec::with_capacity(base.len());
    for (k, g) in base.members().iter().enumerate() {
        let weight = 2f64.powf(-((k as f64 + 1.0) * big_r as f64) * sigma);
        if weight == 1.0 {
            members.push(g.clone());
        } else {
            let spec: Vec<Complex64> = g.spectrum().iter().map(|c| c * weight).collect();
            members.push(GridFunction::from_spectrum(grid, spec, g.band_limit())?);
        }
    }
    let scales = base.scales().to_vec();
    FunctionFamily::new(FamilyKind::Sobolev, members, scales)
}

/// Selection probability of level-`k` cubes in the oscillatory family:
/// `a_k = 2^{-kγd}`.
pub fn oscillatory_probability(d: u8, gamma: f64, k: u32) -> f64 {
    2f64.powf(-(k as f64) * gamma * d as f64)
}

/// Amplitude of the level-`k` oscillatory member: `β_k = a_k^{-1/p}`.
pub fn oscillatory_amplitude(d: u8, gamma: f64, p: f64, k: u32) -> f64 {
    oscillatory_probability(d, gamma, k).powf(-p.recip())
}

/// Grid sample indices of the centers of the selected level-`level` cubes
/// for selector stream (`seed`, `stream`) at probability `a`. Cube centers
/// are grid points only for `level ≤ J-1`.
pub fn selected_cube_centers(
    grid: Grid,
    level: u32,
    a: f64,
    seed: u64,
    stream: u64,
) -> Result<Vec<usize>> {
    check_level(grid, level)?;
    check_probability(a)?;
    if level + 1 > grid.j() {
        return Err(Error::resolution(format!(
            "cube centers at level {level} are not grid points (need level <= J-1 = {})",
            grid.j() - 1
        )));
    }
    let step = 1usize << (grid.j() - level);
    let half = step / 2;
    let mut centers = Vec::new();
    for cube in cubes_at_level(grid.d(), level) {
        if cube_selector(seed, stream, cube.linear_index(grid.d()) as u64, a) {
            let axes = [
                cube.index[0] * step + half,
                if grid.d() == 2 { cube.index[1] * step + half } else { 0 },
            ];
            centers.push(grid.index_of(axes));
        }
    }
    Ok(centers)
}

/// The sparse oscillatory family: member `k = 1, …, L` is
///
/// `f_k = β_k Σ_Q θ_{Q,a_k} ψ(2^k(x - x_Q))`,
///
/// summing over the level-`k` dyadic cubes `Q` with centers `x_Q`, where
/// `θ_{Q,a_k}` are independent Bernoulli selectors at the level-dependent
/// probability `a_k = 2^{-kγd}`, the amplitude is `β_k = a_k^{-1/p}`, and
/// `ψ` is the wide low-pass kernel (spectrum `1` on the ball `|ξ| ≤ 1.55`,
/// vanishing beyond `1.95`). Member `k` therefore has spectrum in the ball
/// of radius `1.95·2^k`, inside the next dyadic shell `2^{k+1}`.
pub fn oscillatory_family(
    grid: Grid,
    l: u32,
    gamma: f64,
    p: f64,
    seed: u64,
) -> Result<FunctionFamily> {
    if l == 0 {
        return Err(Error::parameter("family needs at least one member".to_string()));
    }
    check_gamma(gamma)?;
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::parameter(format!(
            "integrability exponent must be finite and > 0, got {p}"
        )));
    }
    if l + 2 > grid.j() {
        return Err(Error::resolution(format!(
            "member band {WIDE_SUPPORT_HI}·2^{l} exceeds the largest representable \
             frequency: need L <= J-2 = {}",
            grid.j() - 2
        )));
    }
    let d = grid.d();
    let delta_height = grid.total() as f64; // unit-mass spike on one cell
    let mut members = Vec::with_capacity(l as usize);
    let mut scales = Vec::with_capacity(l as usize);
    for k in 1..=l {
        let a_k = oscillatory_probability(d, gamma, k);
        let beta_k = oscillatory_amplitude(d, gamma, p, k);
        let mut spikes = vec![0.0f64; grid.total()];
        for idx in selected_cube_centers(grid, k, a_k, seed, k as u64)? {
            spikes[idx] = delta_height;
        }
        let train = GridFunction::from_real(grid, spikes)?;
        let dilation = 2f64.powi(-(k as i32));
        let kernel_mass = 2f64.powi(-(k as i32) * d as i32);
        let spec: Vec<Complex64> = train
            .spectrum()
            .iter()
            .enumerate()
            .map(|(idx, s)| {
                s * (beta_k * kernel_mass * wide_window_profile(grid.freq_norm(idx) * dilation))
            })
            .collect();
        let band = BandLimit::ball(WIDE_SUPPORT_HI * 2f64.powi(k as i32));
        members.push(GridFunction::from_spectrum(grid, spec, Some(band))?);
        scales.push(2f64.powi(k as i32));
    }
    FunctionFamily::new(FamilyKind::Oscillatory, members, scales)
}
