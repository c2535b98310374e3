//! # sharplab-core
//!
//! A numerical laboratory for vector-valued inequalities of maximal and
//! multiplier operators on a discretized periodic torus.
//!
//! The crate builds structured random and deterministic families of functions
//! on `[0,1)^d` (`d` = 1 or 2) sampled on a dyadic grid of `2^J` points per
//! axis, applies the operators that act on them (Peetre-type and geometric
//! maximal functions, Fourier multipliers, finite differences), measures
//! mixed `L^p(ℓ^q)` norms on both sides of the inequalities of interest, and
//! fits growth rates against the family size or scale parameter.
//!
//! Module map:
//! - [`grid`]: the torus grid, sampled functions, DFT, dyadic cubes, norms.
//! - [`constructions`]: random cube fields, their moments, the band-limited
//!   mollifier, and the concrete function families used by the experiments.
//! - [`operators`]: maximal functions, Fourier multipliers, finite
//!   differences and the smoothness modulus.
//! - [`mixed_norms`]: mixed-norm evaluation, smooth dyadic frequency blocks,
//!   sampling sums over dyadic cubes, and slope fitting.
//! - [`experiments`]: reproducible scenario runners and result persistence.

pub mod constructions;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod mixed_norms;
pub mod operators;

pub use error::{Error, Result};

use std::sync::Once;

static POOL_INIT: Once = Once::new();

/// Environment variable that caps the worker thread count.
pub const THREADS_ENV: &str = "SHARPLAB_THREADS";

/// Environment variable used by the verification battery to inject faults
/// into named constructions (test fixture; see the CLI's `verify` command).
pub const FAULT_ENV: &str = "SHARPLAB_FAULT";

/// Initialize the global worker pool, honoring `SHARPLAB_THREADS`.
///
/// Safe to call repeatedly; only the first call has any effect. If the
/// variable is unset or unparsable the default pool size (one worker per
/// available core) is kept.
pub fn init_thread_pool() {
    POOL_INIT.call_once(|| {
        if let Ok(v) = std::env::var(THREADS_ENV) {
            if let Ok(n) = v.trim().parse::<usize>() {
                if n >= 1 {
                    // Ignore the error: the pool may already have been built
                    // by an embedding application, which is fine.
                    let _ = rayon::ThreadPoolBuilder::new()
                        .num_threads(n)
                        .build_global();
                }
            }
        }
    });
}
