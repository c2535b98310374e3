//! Dyadic frequency blocks and the block-weighted (Triebel–Lizorkin-type)
//! norm.
//!
//! The blocks telescope a fixed smooth radial profile φ (the plateau
//! profile: 1 on [0,1/2], smoothly decreasing to 0 at 1):
//!
//! - `β̂_0(ξ) = φ(|ξ|)`
//! - `β̂_k(ξ) = φ(2^{-k}|ξ|) − φ(2^{-k+1}|ξ|)` for k ≥ 1,
//!
//! so `Σ_{k=0}^{K} β̂_k(ξ) = φ(2^{-K}|ξ|)`, which equals 1 exactly for
//! `|ξ| ≤ 2^{K-1}`: the partition of unity is exact on that ball, and the
//! k-th block's spectrum lives in the open annulus `2^{k-2} < |ξ| < 2^k`.

use crate::constructions::mollifier::plateau;
use crate::error::{Error, Result};
use crate::grid::norms::{check_exponent, lp_norm_of_abs};
use crate::grid::{BandLimit, GridFunction};
use crate::operators::multiplier::apply_multiplier;
use num_complex::Complex64;
use std::ops::RangeInclusive;

/// Spectral profile `β̂_k` of the k-th block at radial frequency `rho`.
pub fn block_profile(k: u32, rho: f64) -> f64 {
    if k == 0 {
        plateau(rho)
    } else {
        plateau(rho / 2f64.powi(k as i32)) - plateau(rho / 2f64.powi(k as i32 - 1))
    }
}

/// Smallest top block K such that the partition `Σ_{k≤K} β̂_k` is exactly 1
/// on the ball `|ξ| ≤ r` (i.e. `2^{K-1} ≥ r`).
pub fn required_top_block(r: f64) -> u32 {
    let mut k = 0u32;
    while 2f64.powi(k as i32 - 1) < r {
        k += 1;
    }
    k
}

/// Top block required to cover every representable frequency of `f`: its
/// band-limit radius when annotated, the full lattice corner otherwise.
pub fn required_top_block_for(f: &GridFunction) -> u32 {
    let r = match f.band_limit() {
        Some(b) => b.r,
        None => {
            let g = f.grid();
            (g.d() as f64).sqrt() * g.max_freq()
        }
    };
    required_top_block(r)
}

/// The block functions `β_k ∗ f` for `k ∈ blocks`.
pub fn block_functions(f: &GridFunction, blocks: RangeInclusive<u32>) -> Result<Vec<GridFunction>> {
    let mut out = Vec::new();
    for k in blocks {
        let band = BandLimit::ball(2f64.powi(k as i32));
        let g = apply_multiplier(
            f,
            |_, rho| Complex64::new(block_profile(k, rho), 0.0),
            Some(band),
        )?;
        out.push(g);
    }
    Ok(out)
}

/// Block-weighted norm `‖ (Σ_k (2^{kσ} |β_k∗f|)^q)^{1/q} ‖_{L^p}` over
/// `k ∈ blocks`.
///
/// The range must start at 0 and reach the top block covering `f`'s
/// spectrum (its band annotation, or the lattice corner when unannotated);
/// anything less silently drops frequency content, so it is rejected with
/// an error naming the required range.
pub fn tl_norm(
    f: &GridFunction,
    p: f64,
    q: f64,
    sigma: f64,
    blocks: RangeInclusive<u32>,
) -> Result<f64> {
    check_exponent(p)?;
    check_exponent(q)?;
    if !sigma.is_finite() {
        return Err(Error::parameter(format!("smoothness weight must be finite, got {sigma}")));
    }
    let (lo, hi) = (*blocks.start(), *blocks.end());
    let needed = required_top_block_for(f);
    if lo != 0 || hi < needed {
        return Err(Error::parameter(format!(
            "block range {lo}..={hi} does not cover the spectrum; required range 0..={needed}"
        )));
    }
    let grid = f.grid();
    let mut acc = vec![0.0f64; grid.total()];
    for k in lo..=hi {
        let band = BandLimit::ball(2f64.powi(k as i32));
        let bk = apply_multiplier(
            f,
            |_, rho| Complex64::new(block_profile(k, rho), 0.0),
            Some(band),
        )?;
        let w = 2f64.powf(k as f64 * sigma);
        for (slot, c) in acc.iter_mut().zip(bk.samples()) {
            *slot += (w * c.norm()).powf(q);
        }
    }
    let inv_q = q.recip();
    for slot in acc.iter_mut() {
        *slot = slot.powf(inv_q);
    }
    Ok(lp_norm_of_abs(grid, &acc, p))
}
