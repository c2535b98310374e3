//! Vector-valued norms and norm equivalences: `L^p(ℓ^q)` mixed norms,
//! frequency-block (Triebel–Lizorkin-type) norms, discrete sampled-sum
//! norms for band-limited functions, and slope-fitting statistics.

pub mod blocks;
pub mod pp;
pub mod slope;

use crate::error::{Error, Result};
use crate::grid::norms::{check_exponent, lp_norm_of_abs};
use crate::grid::GridFunction;

/// Result of a mixed-norm evaluation. `empty_family` flags the degenerate
/// zero-member case (the value is then 0 by convention).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedNormOutcome {
    pub value: f64,
    pub empty_family: bool,
}

/// `‖ (Σ_k |f_k|^q)^{1/q} ‖_{L^p}`: the ℓ^q norm over members pointwise,
/// then the L^p norm over the torus. `q = ∞` (pointwise supremum over
/// members) is accepted; `p` must be finite positive.
pub fn mixed_norm(members: &[GridFunction], p: f64, q: f64) -> Result<MixedNormOutcome> {
    check_exponent(p)?;
    if !(q > 0.0) || q.is_nan() {
        return Err(Error::parameter(format!("inner exponent must be > 0, got {q}")));
    }
    let Some(first) = members.first() else {
        return Ok(MixedNormOutcome { value: 0.0, empty_family: true });
    };
    let grid = first.grid();
    for m in members {
        if m.grid() != grid {
            return Err(Error::parameter(
                "all family members must live on the same grid".to_string(),
            ));
        }
    }
    let total = grid.total();
    let mut acc = vec![0.0f64; total];
    if q.is_infinite() {
        for m in members {
            for (slot, c) in acc.iter_mut().zip(m.samples()) {
                let v = c.norm();
                if v > *slot {
                    *slot = v;
                }
            }
        }
    } else {
        for m in members {
            if q == 1.0 {
                for (slot, c) in acc.iter_mut().zip(m.samples()) {
                    *slot += c.norm();
                }
            } else if q == 2.0 {
                for (slot, c) in acc.iter_mut().zip(m.samples()) {
                    *slot += c.norm_sqr();
                }
            } else {
                for (slot, c) in acc.iter_mut().zip(m.samples()) {
                    *slot += c.norm().powf(q);
                }
            }
        }
        let inv_q = q.recip();
        for slot in acc.iter_mut() {
            *slot = if q == 2.0 { slot.sqrt() } else { slot.powf(inv_q) };
        }
    }
    Ok(MixedNormOutcome { value: lp_norm_of_abs(grid, &acc, p), empty_family: false })
}
