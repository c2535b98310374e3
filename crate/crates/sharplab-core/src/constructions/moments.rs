//! Moments of the cube-count of a random field sum.
//!
//! At any fixed point `x`, the sum `Σ_{k=1}^L h_k(x)` of `L` independent
//! Bernoulli(a) cube fields is Binomial(L, a), so its `r`-th moment is
//!
//! `Σ_{n=0}^L C(L,n) a^n (1-a)^{L-n} n^r`.
//!
//! [`moment_closed_form`] evaluates this in the log domain (stable up to
//! `L ~ 10^4` for any `a`), [`moment_exhaustive`] re-derives it by brute
//! enumeration of all `2^L` selector patterns (verification oracle, small
//! `L` only), and [`moment_empirical`] estimates it by sampling fields on a
//! grid and integrating.

use super::bernoulli::{check_probability, sample_field};
use crate::error::{Error, Result};
use crate::grid::Grid;

fn check_moment_params(big_l: usize, a: f64, r: f64) -> Result<()> {
    if big_l == 0 {
        return Err(Error::parameter("family size L must be >= 1".to_string()));
    }
    check_probability(a)?;
    if a >= 1.0 {
        return Err(Error::parameter("moment formulas need a < 1".to_string()));
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::parameter(format!("moment order must be finite and > 0, got {r}")));
    }
    Ok(())
}

/// `E[B^r]` for `B ~ Binomial(L, a)`, via the closed-form sum in the log
/// domain: term `n` has logarithm `ln C(L,n) + n ln a + (L-n) ln(1-a) + r ln n`.
pub fn moment_closed_form(big_l: usize, a: f64, r: f64) -> Result<f64> {
    check_moment_params(big_l, a, r)?;
    let l = big_l as f64;
    let (ln_a, ln_1a) = (a.ln(), (1.0 - a).ln());
    // ln C(L,n) by the multiplicative recurrence; n = 0 contributes nothing
    // to the moment because 0^r = 0 for r > 0.
    let mut ln_choose = 0.0f64; // ln C(L,0)
    let mut log_terms = Vec::with_capacity(big_l);
    for n in 1..=big_l {
        let nf = n as f64;
        ln_choose += ((l - nf + 1.0) / nf).ln();
        log_terms.push(ln_choose + nf * ln_a + (l - nf) * ln_1a + r * nf.ln());
    }
    // Log-sum-exp.
    let m = log_terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let sum: f64 = log_terms.iter().map(|t| (t - m).exp()).sum();
    Ok((m + sum.ln()).exp())
}

/// Largest family size accepted by the exhaustive oracle (2^L patterns).
pub const EXHAUSTIVE_MAX_L: usize = 24;

/// `E[B^r]` by enumerating all `2^L` selector patterns and accumulating
/// probability-weighted counts. Exponential cost — verification oracle only.
pub fn moment_exhaustive(big_l: usize, a: f64, r: f64) -> Result<f64> {
    check_moment_params(big_l, a, r)?;
    if big_l > EXHAUSTIVE_MAX_L {
        return Err(Error::parameter(format!(
            "exhaustive enumeration is capped at L = {EXHAUSTIVE_MAX_L}, got {big_l}"
        )));
    }
    let mut total = 0.0f64;
    for mask in 0u64..(1u64 << big_l) {
        let ones = mask.count_ones() as i32;
        let prob = a.powi(ones) * (1.0 - a).powi(big_l as i32 - ones);
        let value = if ones == 0 { 0.0 } else { (ones as f64).powf(r) };
        total += prob * value;
    }
    Ok(total)
}

/// Monte-Carlo estimate: sample `trials` independent families of `L` fields
/// at the given cube level on `grid`, integrate `(Σ_k h_k)^r` over the torus
/// for each, and average. Returns `(mean, standard error)`.
pub fn moment_empirical(
    grid: Grid,
    level: u32,
    big_l: usize,
    a: f64,
    r: f64,
    seed: u64,
    trials: usize,
) -> Result<(f64, f64)> {
    check_moment_params(big_l, a, r)?;
    if trials == 0 {
        return Err(Error::parameter("trials must be >= 1".to_string()));
    }
    let mut values = Vec::with_capacity(trials);
    for t in 0..trials {
        let trial_seed = seed.wrapping_add(t as u64);
        let mut sum = vec![0.0f64; grid.total()];
        for k in 0..big_l {
            let h = sample_field(grid, level, a, trial_seed, k as u64)?;
            for (acc, s) in sum.iter_mut().zip(h.samples()) {
                *acc += s.re;
            }
        }
        let integral: f64 =
            grid.cell_measure() * sum.iter().map(|&v| if v > 0.0 { v.powf(r) } else { 0.0 }).sum::<f64>();
        values.push(integral);
    }
    let mean = values.iter().sum::<f64>() / trials as f64;
    let var = if trials > 1 {
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (trials as f64 - 1.0)
    } else {
        0.0
    };
    Ok((mean, (var / trials as f64).sqrt()))
}
