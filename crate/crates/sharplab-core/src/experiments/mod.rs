//! Scripted measurement scenarios.
//!
//! Each scenario builds a function family, drives it through one of the
//! operators, and reports how the ratio of vector-valued norms
//!
//! ```text
//!     lhs / rhs  =  ‖{T f_k}‖_{L^p(ℓ^q)} / ‖{f_k}‖_{L^p(ℓ^q)}
//! ```
//!
//! moves along a one-dimensional integer sweep.  A run is a pure function of
//! its [`ExperimentConfig`]: the same config and master seed reproduce every
//! sample bitwise, so the CSV written by [`persist`] is byte-identical across
//! reruns.
//!
//! Randomized scenarios average `seed_count` independent repetitions per
//! sweep point (master seed + offset) and report the sample standard error;
//! slopes are always fitted on the per-point means and only when the sweep
//! has at least three points.

mod persist;
mod runners;

pub use persist::{persist, CSV_HEADER};
pub use runners::window_scaling_ratio;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::mixed_norms::slope::SlopeFit;
use serde::Serialize;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

/// Which measurement a run performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// Pointwise maximal function with decaying weight on sparse random
    /// families: ratio growth in the family size exposes the weight's
    /// critical decay rate.
    Peetre,
    /// Same ratio on the deterministic nested-cube families (no averaging).
    Deterministic,
    /// Windowed maximal operator: ratio growth in the window exponent.
    Window,
    /// Smoothness-modulus norm against its block-decomposition counterpart
    /// on weighted ladder sums.
    Sobolev,
    /// Truncations of the compactly-supported radial multiplier kernel:
    /// kernel quasi-norm against the empirical family constant.
    BochnerRiesz,
    /// Oscillating-phase multiplier on spike-train families: member count
    /// drives the two sides at different rates.
    Oscillatory,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::Peetre,
        Scenario::Deterministic,
        Scenario::Window,
        Scenario::Sobolev,
        Scenario::BochnerRiesz,
        Scenario::Oscillatory,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::Peetre => "peetre",
            Scenario::Deterministic => "deterministic",
            Scenario::Window => "window",
            Scenario::Sobolev => "sobolev",
            Scenario::BochnerRiesz => "bochner-riesz",
            Scenario::Oscillatory => "oscillatory",
        }
    }

    pub fn parse(s: &str) -> Result<Scenario> {
        match s {
            "peetre" => Ok(Scenario::Peetre),
            "deterministic" => Ok(Scenario::Deterministic),
            "window" => Ok(Scenario::Window),
            "sobolev" => Ok(Scenario::Sobolev),
            "bochner-riesz" | "bochner_riesz" => Ok(Scenario::BochnerRiesz),
            "oscillatory" => Ok(Scenario::Oscillatory),
            other => Err(Error::config(format!(
                "unknown scenario {other:?}; expected one of peetre, deterministic, \
                 window, sobolev, bochner-riesz, oscillatory"
            ))),
        }
    }

    /// Name of the swept variable, used as the `sweep_name` CSV column.
    pub fn sweep_name(self) -> &'static str {
        match self {
            Scenario::Peetre | Scenario::Deterministic | Scenario::Sobolev => "sparsity_exp",
            Scenario::Window => "window_exp",
            Scenario::BochnerRiesz => "truncation_exp",
            Scenario::Oscillatory => "family_size",
        }
    }
}

/// Complete description of one run.  Everything that can influence the
/// numbers lives here; the struct is echoed verbatim into `meta.json`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    /// Dimension of the torus (1 or 2).
    pub d: u8,
    /// Grid exponent: `2^grid_exp` samples per axis.
    pub grid_exp: u32,
    /// Outer Lebesgue exponent of the mixed norm.
    pub p: f64,
    /// Inner sequence exponent of the mixed norm.
    pub q: f64,
    /// Maximal-weight decay rate / smoothness index, where applicable.
    pub sigma: f64,
    /// Phase exponent of the oscillatory multiplier (oscillatory only).
    pub gamma: f64,
    /// Order of the radial multiplier (bochner-riesz only).
    pub lambda: f64,
    /// Difference order of the smoothness modulus (sobolev only).
    pub modulus_order: u32,
    /// Smoothing-kernel sharpness exponent `M` used by family builders.
    pub mollifier_m: u32,
    /// Gap between consecutive ladder levels (sobolev only).
    pub level_stride: u32,
    /// Member-count cap for capped scenarios; 0 means uncapped.
    pub k_cap: u32,
    /// Inclusive sweep range for the scenario's integer variable.
    pub sweep_lo: u32,
    pub sweep_hi: u32,
    /// Master seed; repetition `i` of a sweep point uses `seed + i`.
    pub seed: u64,
    /// Independent repetitions averaged per sweep point (min 1).
    pub seed_count: u32,
    /// Corpus size for scenarios that maximize over random families.
    pub trials: u32,
}

impl ExperimentConfig {
    /// A ready-to-run configuration with conservative sizes for `scenario`.
    pub fn defaults_for(scenario: Scenario) -> ExperimentConfig {
        let base = ExperimentConfig {
            scenario,
            d: 1,
            grid_exp: 10,
            p: 2.0,
            q: 1.0,
            sigma: 0.5,
            gamma: 0.5,
            lambda: 0.55,
            modulus_order: 2,
            mollifier_m: 2,
            level_stride: 4,
            k_cap: 0,
            sweep_lo: 2,
            sweep_hi: 5,
            seed: 1,
            seed_count: 8,
            trials: 6,
        };
        match scenario {
            Scenario::Peetre => ExperimentConfig { grid_exp: 10, ..base },
            Scenario::Deterministic => {
                ExperimentConfig { grid_exp: 12, seed_count: 1, ..base }
            }
            Scenario::Window => {
                ExperimentConfig { grid_exp: 12, sweep_lo: 0, sweep_hi: 5, ..base }
            }
            Scenario::Sobolev => ExperimentConfig {
                grid_exp: 12,
                sigma: 0.75,
                k_cap: 2,
                sweep_lo: 3,
                sweep_hi: 5,
                ..base
            },
            Scenario::BochnerRiesz => ExperimentConfig {
                grid_exp: 14,
                p: 1.2,
                q: 0.8,
                sweep_lo: 2,
                sweep_hi: 8,
                ..base
            },
            Scenario::Oscillatory => ExperimentConfig {
                grid_exp: 18,
                sweep_lo: 2,
                sweep_hi: 4,
                ..base
            },
        }
    }

    /// Family size `2^{N·d}` used by the sparse-family scenarios.
    pub(crate) fn family_size(&self, n: u32) -> u32 {
        1u32 << (n * self.d as u32)
    }

    /// Validate every precondition that can be checked without computing.
    ///
    /// Violations of parameter relations give parameter/config errors; sweeps
    /// that cannot fit on the requested grid give resolution errors naming
    /// the exponent that would be required.
    pub fn validate(&self) -> Result<()> {
        // Shared checks: the grid itself, exponents, sweep, repetitions.
        Grid::new(self.d, self.grid_exp)?;
        crate::grid::norms::check_exponent(self.p)?;
        crate::grid::norms::check_exponent(self.q)?;
        if self.sweep_lo > self.sweep_hi {
            return Err(Error::parameter(format!(
                "sweep range is empty: lo = {} > hi = {}",
                self.sweep_lo, self.sweep_hi
            )));
        }
        if self.seed_count == 0 {
            return Err(Error::parameter("seed_count must be >= 1".to_string()));
        }
        if !(1..=12).contains(&self.mollifier_m) {
            return Err(Error::parameter(format!(
                "mollifier exponent must satisfy 1 <= M <= 12, got {}",
                self.mollifier_m
            )));
        }
        let j = self.grid_exp;
        let m = self.mollifier_m;
        match self.scenario {
            Scenario::Peetre => {
                if self.q > self.p {
                    return Err(Error::parameter(format!(
                        "peetre scenario requires q <= p, got q = {} > p = {}",
                        self.q, self.p
                    )));
                }
                if !(self.sigma.is_finite() && self.sigma > 0.0) {
                    return Err(Error::parameter(format!(
                        "weight decay rate must be finite and > 0, got {}",
                        self.sigma
                    )));
                }
                // Members live at level J-2; the sparse geometry needs room
                // both above (smoothing) and below (coarser shells down to
                // level J-2-N must exist).
                let needed = (self.sweep_hi + 3).max(m + 4);
                if j < needed {
                    return Err(Error::resolution(format!(
                        "peetre sweep up to N = {} with M = {m} needs grid exponent >= {needed}, got {j}",
                        self.sweep_hi
                    )));
                }
            }
            Scenario::Deterministic => {
                if self.q > self.p {
                    return Err(Error::parameter(format!(
                        "deterministic scenario requires q <= p, got q = {} > p = {}",
                        self.q, self.p
                    )));
                }
                if self.sweep_lo < 2 {
                    return Err(Error::parameter(format!(
                        "coarse-cell exponent N must be >= 2 so every scale in \
                         N..=cap admits the minimum smoothing radius, got {}",
                        self.sweep_lo
                    )));
                }
                if self.k_cap > 0 && self.k_cap < self.sweep_hi {
                    return Err(Error::parameter(format!(
                        "k_cap = {} is below the largest sweep value {}; the scale \
                         range N..=cap would be empty",
                        self.k_cap, self.sweep_hi
                    )));
                }
                let needed = self.sweep_hi + m;
                if j < needed {
                    return Err(Error::resolution(format!(
                        "deterministic sweep up to N = {} with M = {m} needs grid \
                         exponent >= {needed}, got {j}",
                        self.sweep_hi
                    )));
                }
            }
            Scenario::Window => {
                if self.q > self.p {
                    return Err(Error::parameter(format!(
                        "window scenario requires q <= p, got q = {} > p = {}",
                        self.q, self.p
                    )));
                }
                if self.trials == 0 {
                    return Err(Error::parameter(
                        "window scenario needs trials >= 1 corpus families".to_string(),
                    ));
                }
                let d_exp = self.sweep_hi * self.d as u32;
                if d_exp > 18 {
                    return Err(Error::parameter(format!(
                        "window sweep top n = {} in dimension {} would need 2^{} \
                         corpus members; supported sweeps have n·d <= 18",
                        self.sweep_hi,
                        self.d,
                        d_exp + 2
                    )));
                }
                // Corpus members are cube fields at level J-2 with selection
                // probability 2^{-(n·d+3)}; each member needs a couple of
                // selected cubes in expectation: (J-2)·d >= n·d + 4.  This
                // also keeps the top window inside the torus.
                let needed = self.sweep_hi + 2 + (3 + self.d as u32) / self.d as u32;
                if j < needed {
                    return Err(Error::resolution(format!(
                        "window sweep up to n = {} needs grid exponent >= {needed}, \
                         got {j}",
                        self.sweep_hi
                    )));
                }
            }
            Scenario::Sobolev => {
                if self.q >= self.p {
                    return Err(Error::parameter(format!(
                        "sobolev scenario requires q < p, got q = {} >= p = {}",
                        self.q, self.p
                    )));
                }
                let floor = self.d as f64 / self.p;
                if !(self.sigma.is_finite() && self.sigma > floor) {
                    return Err(Error::parameter(format!(
                        "smoothness index must exceed d/p = {floor}, got {}",
                        self.sigma
                    )));
                }
                if self.modulus_order == 0 {
                    return Err(Error::parameter(
                        "difference order must be >= 1".to_string(),
                    ));
                }
                if self.level_stride == 0 {
                    return Err(Error::parameter("level stride must be >= 1".to_string()));
                }
                if self.k_cap == 0 {
                    return Err(Error::parameter(
                        "sobolev scenario runs the capped ladder; set k_cap >= 1 \
                         (the full ladder doubles its top level with every sweep \
                         step and leaves any fixed grid immediately)"
                            .to_string(),
                    ));
                }
                if self.sweep_lo < 1 {
                    return Err(Error::parameter(
                        "sparsity exponent N must be >= 1".to_string(),
                    ));
                }
                let smallest_family = self.family_size(self.sweep_lo);
                if self.k_cap > smallest_family {
                    return Err(Error::parameter(format!(
                        "k_cap = {} exceeds the smallest family size 2^(N*d) = \
                         {smallest_family} at N = {}",
                        self.k_cap, self.sweep_lo
                    )));
                }
                let top = self.level_stride * self.k_cap;
                let needed = top + m + 1;
                if j < needed {
                    return Err(Error::resolution(format!(
                        "ladder top level R*cap = {top} with M = {m} needs grid \
                         exponent >= {needed}, got {j}"
                    )));
                }
            }
            Scenario::BochnerRiesz => {
                if !(self.q < self.p && self.p < 2.0) {
                    return Err(Error::parameter(format!(
                        "bochner-riesz scenario requires q < p < 2, got q = {}, p = {}",
                        self.q, self.p
                    )));
                }
                crate::operators::multiplier::check_lambda(self.lambda)?;
                // Truncation window 2^{N+1} must stay inside half the
                // physical torus of side 2^{J-1}.
                let needed = self.sweep_hi + 3;
                if j < needed {
                    return Err(Error::resolution(format!(
                        "truncation exponent up to N = {} needs grid exponent >= \
                         {needed}, got {j}",
                        self.sweep_hi
                    )));
                }
                if j < m + 4 {
                    return Err(Error::resolution(format!(
                        "probe families with M = {m} need grid exponent >= {}, got {j}",
                        m + 4
                    )));
                }
            }
            Scenario::Oscillatory => {
                if !(self.q < self.p && self.p <= 2.0) {
                    return Err(Error::parameter(format!(
                        "oscillatory scenario requires q < p <= 2, got q = {}, p = {}",
                        self.q, self.p
                    )));
                }
                if !(self.gamma.is_finite() && self.gamma > 0.0 && self.gamma < 1.0) {
                    return Err(Error::parameter(format!(
                        "phase exponent must satisfy 0 < gamma < 1, got {}",
                        self.gamma
                    )));
                }
                if self.sweep_lo < 1 {
                    return Err(Error::parameter(
                        "family-size exponent must be >= 1".to_string(),
                    ));
                }
                if self.sweep_hi >= 31 {
                    return Err(Error::parameter(format!(
                        "family-size exponent {} overflows the member count",
                        self.sweep_hi
                    )));
                }
                // The family with L = 2^hi members occupies levels 1..=L.
                let l_max = 1u32 << self.sweep_hi;
                let needed = l_max + 2;
                if j < needed {
                    return Err(Error::resolution(format!(
                        "family size L = {l_max} occupies frequency levels up to \
                         L and needs grid exponent >= {needed}, got {j} \
                         (max supported exponent is {})",
                        crate::grid::MAX_GRID_EXP
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Aggregated measurements at one sweep point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRecord {
    pub sweep_value: f64,
    /// Number of independent repetitions behind the means.
    pub seed_count: u32,
    pub lhs_mean: f64,
    pub lhs_stderr: f64,
    pub rhs_mean: f64,
    pub rhs_stderr: f64,
    /// Mean of the per-repetition ratios lhs/rhs (not the ratio of means).
    pub ratio_mean: f64,
    pub ratio_stderr: f64,
}

impl SweepRecord {
    /// Aggregate per-repetition (lhs, rhs) samples into one record.
    pub(crate) fn from_samples(sweep_value: f64, samples: &[(f64, f64)]) -> SweepRecord {
        let lhs: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let rhs: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let ratio: Vec<f64> = samples.iter().map(|s| s.0 / s.1).collect();
        let (lhs_mean, lhs_stderr) = mean_stderr(&lhs);
        let (rhs_mean, rhs_stderr) = mean_stderr(&rhs);
        let (ratio_mean, ratio_stderr) = mean_stderr(&ratio);
        SweepRecord {
            sweep_value,
            seed_count: samples.len() as u32,
            lhs_mean,
            lhs_stderr,
            rhs_mean,
            rhs_stderr,
            ratio_mean,
            ratio_stderr,
        }
    }
}

/// Everything a finished run produces.
#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    /// Name of the swept variable (one per scenario).
    pub sweep_name: &'static str,
    /// One record per sweep value, in increasing sweep order.
    pub records: Vec<SweepRecord>,
    /// Growth fit over the per-point ratio means; present iff the sweep has
    /// at least three points and the fit is finite.  The x/y transform is
    /// scenario-specific (see the runner docs).
    pub slope: Option<SlopeFit>,
    /// Unix time (seconds) when the run started.
    pub started_at: f64,
    /// Wall-clock duration of the run in seconds.
    pub duration_s: f64,
    /// Crate version that produced the numbers.
    pub version: &'static str,
}

/// Validate `cfg`, run its scenario, and fit the growth slope.
pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    crate::init_thread_pool();
    let started_at = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0);
    let clock = Instant::now();
    let records = match cfg.scenario {
        Scenario::Peetre => runners::run_peetre(cfg)?,
        Scenario::Deterministic => runners::run_deterministic(cfg)?,
        Scenario::Window => runners::run_window(cfg)?,
        Scenario::Sobolev => runners::run_sobolev(cfg)?,
        Scenario::BochnerRiesz => runners::run_bochner_riesz(cfg)?,
        Scenario::Oscillatory => runners::run_oscillatory(cfg)?,
    };
    let slope = fit_ratio_slope(cfg, &records);
    Ok(ExperimentResult {
        config: cfg.clone(),
        sweep_name: cfg.scenario.sweep_name(),
        records,
        slope,
        started_at,
        duration_s: clock.elapsed().as_secs_f64(),
        version: env!("CARGO_PKG_VERSION"),
    })
}

/// Scenario-specific growth fit on the per-point ratio means.
///
/// * peetre/deterministic at the critical rate `sigma = d/q`: affine fit of
///   ratio against `N^{1/q}` (the expected growth is a power of the
///   logarithm of the family size);
/// * peetre/deterministic otherwise: log-log fit of ratio against the family
///   size `2^{N·d}`;
/// * window, sobolev, bochner-riesz: affine fit of `log2 ratio` against the
///   sweep variable (growth per octave);
/// * oscillatory: log-log fit of ratio against the member count.
fn fit_ratio_slope(cfg: &ExperimentConfig, records: &[SweepRecord]) -> Option<SlopeFit> {
    if records.len() < 3 {
        return None;
    }
    let xs: Vec<f64> = records.iter().map(|r| r.sweep_value).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.ratio_mean).collect();
    let fit = match cfg.scenario {
        Scenario::Peetre | Scenario::Deterministic => {
            let critical = cfg.d as f64 / cfg.q;
            if (cfg.sigma - critical).abs() < 1e-9 {
                let tx: Vec<f64> = xs.iter().map(|n| n.powf(cfg.q.recip())).collect();
                crate::mixed_norms::slope::linear_slope(&tx, &ys)
            } else {
                let sizes: Vec<f64> =
                    xs.iter().map(|n| (cfg.d as f64 * n).exp2()).collect();
                crate::mixed_norms::slope::loglog_slope(&sizes, &ys)
            }
        }
        Scenario::Window | Scenario::Sobolev | Scenario::BochnerRiesz => {
            let ly: Vec<f64> = ys.iter().map(|v| v.log2()).collect();
            crate::mixed_norms::slope::linear_slope(&xs, &ly)
        }
        Scenario::Oscillatory => crate::mixed_norms::slope::loglog_slope(&xs, &ys),
    };
    fit.ok().filter(|f| f.slope.is_finite() && f.r_squared.is_finite())
}

/// Sample mean and standard error (0 for fewer than two samples).
pub(crate) fn mean_stderr(vals: &[f64]) -> (f64, f64) {
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    if vals.len() < 2 {
        return (mean, 0.0);
    }
    let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenario_names_round_trip() {
        for s in Scenario::ALL {
            assert_eq!(Scenario::parse(s.as_str()).unwrap(), s);
        }
        assert!(Scenario::parse("fourier").is_err());
    }

    #[test]
    fn defaults_validate_for_every_scenario() {
        for s in Scenario::ALL {
            let cfg = ExperimentConfig::defaults_for(s);
            cfg.validate().unwrap_or_else(|e| panic!("{}: {e}", s.as_str()));
        }
    }

    #[test]
    fn exponent_order_violations_are_named() {
        let mut cfg = ExperimentConfig::defaults_for(Scenario::Peetre);
        cfg.p = 1.0;
        cfg.q = 2.0;
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains("q <= p"), "{msg}");

        let mut cfg = ExperimentConfig::defaults_for(Scenario::Sobolev);
        cfg.p = cfg.q;
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains("q < p"), "{msg}");

        let mut cfg = ExperimentConfig::defaults_for(Scenario::BochnerRiesz);
        cfg.p = 2.5;
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains("q < p < 2"), "{msg}");
    }

    #[test]
    fn oversized_sweeps_name_the_required_grid_exponent() {
        // A member-count exponent of 5 means 32 members on levels 1..=32,
        // which no supported grid can hold; the error names the requirement.
        let mut cfg = ExperimentConfig::defaults_for(Scenario::Oscillatory);
        cfg.sweep_hi = 5;
        cfg.grid_exp = 20;
        let err = cfg.validate().unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let msg = err.to_string();
        assert!(msg.contains("34"), "{msg}");

        let mut cfg = ExperimentConfig::defaults_for(Scenario::Sobolev);
        cfg.grid_exp = 10;
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains(">= 11"), "{msg}");
    }

    #[test]
    fn empty_sweep_and_zero_seeds_are_rejected() {
        let mut cfg = ExperimentConfig::defaults_for(Scenario::Peetre);
        cfg.sweep_lo = 4;
        cfg.sweep_hi = 3;
        assert!(cfg.validate().unwrap_err().to_string().contains("empty"));

        let mut cfg = ExperimentConfig::defaults_for(Scenario::Peetre);
        cfg.seed_count = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn mean_stderr_matches_hand_computation() {
        let (m, se) = mean_stderr(&[1.0, 2.0, 3.0, 4.0]);
        assert!((m - 2.5).abs() < 1e-15);
        // Sample variance 5/3, stderr sqrt(5/12).
        assert!((se - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
        let (m1, se1) = mean_stderr(&[7.0]);
        assert_eq!((m1, se1), (7.0, 0.0));
    }

    #[test]
    fn slope_needs_three_points() {
        let cfg = ExperimentConfig::defaults_for(Scenario::Peetre);
        let two: Vec<SweepRecord> = (0..2)
            .map(|i| SweepRecord::from_samples(i as f64 + 2.0, &[(2.0, 1.0)]))
            .collect();
        assert!(fit_ratio_slope(&cfg, &two).is_none());
        let three: Vec<SweepRecord> = (0..3)
            .map(|i| {
                let v = (i + 2) as f64;
                SweepRecord::from_samples(v, &[(v * v, v)])
            })
            .collect();
        assert!(fit_ratio_slope(&cfg, &three).is_some());
    }
}
