//! Random cube fields: indicator sums `h = Σ_Q θ_Q χ_Q` over the dyadic
//! cubes of one level, with independent Bernoulli(a) selectors `θ_Q`.
//!
//! Selector bits are *counter-based*: the bit for cube `c` of family member
//! `k` under master seed `s` is a pure function of `(s, k, c)`, evaluated by
//! positioning a ChaCha12 stream cipher at a deterministic offset. This
//! makes every draw reproducible and independent across cubes **and** across
//! family members, without storing any RNG state: members of a family get
//! distinct cipher streams, so two members at the *same* cube level still
//! receive independent selector fields.

use crate::error::Result;
use crate::grid::cubes::{check_level, cube_count, cube_sample_indices, cubes_at_level};
use crate::grid::{Grid, GridFunction};
use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

const INV_2_53: f64 = 1.0 / (1u64 << 53) as f64;

/// Uniform draw in `[0,1)` for cube `cube_idx` of member `member_k` under
/// `seed`. Pure function of its arguments.
pub fn cube_uniform(seed: u64, member_k: u64, cube_idx: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(member_k);
    // One `next_u64` consumes two 32-bit cipher words.
    rng.set_word_pos((2 * cube_idx) as u128);
    ((rng.next_u64() >> 11) as f64) * INV_2_53
}

/// Bernoulli(a) selector bit for one cube of one member.
pub fn cube_selector(seed: u64, member_k: u64, cube_idx: u64, a: f64) -> bool {
    cube_uniform(seed, member_k, cube_idx) < a
}

/// Validate a selection probability `0 ≤ a ≤ 1`. The degenerate endpoints
/// are allowed (useful as test fixtures): `a = 0` selects nothing and
/// `a = 1` selects everything.
pub fn check_probability(a: f64) -> Result<()> {
    if !(a.is_finite() && (0.0..=1.0).contains(&a)) {
        return Err(crate::error::Error::parameter(format!(
            "selection probability must satisfy 0 <= a <= 1, got {a}"
        )));
    }
    Ok(())
}

/// One random cube field: level, selection probability, and the pair
/// `(seed, stream)` that keys its selector draws. The realization is a pure
/// function of these four values; fields with different `stream` values are
/// independent even at equal levels and seeds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BernoulliField {
    /// Dyadic cube level `n` (cubes of side `2^{-n}`).
    pub level: u32,
    /// Selection probability.
    pub a: f64,
    /// Master seed.
    pub seed: u64,
    /// Cipher stream index (one per family member).
    pub stream: u64,
}

impl BernoulliField {
    /// Selector bit `θ_Q` for the cube with the given linear index.
    pub fn selector(&self, cube_idx: u64) -> bool {
        cube_selector(self.seed, self.stream, cube_idx, self.a)
    }

    /// Realize the indicator sum `Σ_Q θ_Q χ_Q` on a grid.
    pub fn realize(&self, grid: Grid) -> Result<GridFunction> {
        check_probability(self.a)?;
        sample_field(grid, self.level, self.a, self.seed, self.stream)
    }

    /// Number of selected cubes in dimension `d`.
    pub fn selected_count(&self, d: u8) -> usize {
        selected_count(d, self.level, self.a, self.seed, self.stream)
    }
}

/// Sample the indicator field `h = Σ_Q θ_Q χ_Q` over the level-`level`
/// dyadic cubes, where `θ_Q ~ Bernoulli(a)` independently.
///
/// `member_k` selects the cipher stream, so fields with different `member_k`
/// are independent even at equal levels and seeds.
pub fn sample_field(grid: Grid, level: u32, a: f64, seed: u64, member_k: u64) -> Result<GridFunction> {
    check_level(grid, level)?;
    check_probability(a)?;
    let mut samples = vec![0.0f64; grid.total()];
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(member_k);
    for cube in cubes_at_level(grid.d(), level) {
        let c = cube.linear_index(grid.d()) as u64;
        rng.set_word_pos((2 * c) as u128);
        let u = ((rng.next_u64() >> 11) as f64) * INV_2_53;
        if u < a {
            for idx in cube_sample_indices(grid, &cube) {
                samples[idx] = 1.0;
            }
        }
    }
    GridFunction::from_real(grid, samples)
}

/// Number of selected cubes in the field of (`seed`, `member_k`) at a level.
pub fn selected_count(d: u8, level: u32, a: f64, seed: u64, member_k: u64) -> usize {
    (0..cube_count(d, level) as u64)
        .filter(|&c| cube_selector(seed, member_k, c, a))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::norms::lp_norm;

    #[test]
    fn selector_is_a_pure_function_of_its_arguments() {
        for (seed, k, c) in [(0u64, 0u64, 0u64), (7, 3, 11), (u64::MAX, 900, 1 << 40)] {
            let u1 = cube_uniform(seed, k, c);
            let u2 = cube_uniform(seed, k, c);
            assert_eq!(u1.to_bits(), u2.to_bits());
            assert!((0.0..1.0).contains(&u1));
        }
    }

    #[test]
    fn different_members_and_seeds_decorrelate() {
        // Mean over many cubes should be near 1/2 for threshold 1/2, and
        // draws across (seed, member) must differ somewhere.
        let n = 4096u64;
        let mean: f64 = (0..n).map(|c| cube_uniform(1, 0, c)).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.03, "mean {mean}");
        let same: usize = (0..n)
            .filter(|&c| cube_uniform(1, 0, c) == cube_uniform(1, 1, c))
            .count();
        assert_eq!(same, 0);
        let same_seed: usize = (0..n)
            .filter(|&c| cube_uniform(1, 0, c) == cube_uniform(2, 0, c))
            .count();
        assert_eq!(same_seed, 0);
    }

    #[test]
    fn sampled_field_is_an_exact_cube_indicator_sum() {
        let g = Grid::new(1, 6).unwrap();
        let f = sample_field(g, 3, 0.5, 42, 0).unwrap();
        // Values are exactly 0 or 1, constant on each level-3 cube.
        let per_cube = 1usize << (6 - 3);
        for (c, chunk) in f.samples().chunks_exact(per_cube).enumerate() {
            let v = chunk[0].re;
            assert!(v == 0.0 || v == 1.0);
            assert!(chunk.iter().all(|s| s.re == v && s.im == 0.0));
            assert_eq!(v == 1.0, cube_selector(42, 0, c as u64, 0.5));
        }
        // Mass equals (count of selected cubes) × cube measure, exactly.
        let count = selected_count(1, 3, 0.5, 42, 0);
        let mass = lp_norm(&f, 1.0).unwrap();
        assert!((mass - count as f64 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn probability_one_selects_everything() {
        let g = Grid::new(2, 4).unwrap();
        let f = sample_field(g, 2, 1.0, 9, 5).unwrap();
        assert!(f.samples().iter().all(|c| c.re == 1.0));
    }

    #[test]
    fn empirical_rate_matches_probability() {
        let a = 0.125;
        let hits = selected_count(1, 14, a, 31, 2); // 16384 cubes
        let rate = hits as f64 / 16384.0;
        assert!((rate - a).abs() < 0.01, "rate {rate}");
    }

    #[test]
    fn probability_zero_selects_nothing() {
        let g = Grid::new(1, 5).unwrap();
        let f = sample_field(g, 3, 0.0, 77, 0).unwrap();
        assert!(f.samples().iter().all(|c| c.re == 0.0 && c.im == 0.0));
    }

    #[test]
    fn invalid_probability_is_rejected() {
        let g = Grid::new(1, 5).unwrap();
        assert!(sample_field(g, 2, -0.1, 1, 0).is_err());
        assert!(sample_field(g, 2, 1.5, 1, 0).is_err());
        assert!(sample_field(g, 2, f64::NAN, 1, 0).is_err());
    }

    #[test]
    fn field_struct_wraps_the_functional_api_exactly() {
        let g = Grid::new(1, 7).unwrap();
        let field = BernoulliField { level: 4, a: 0.5, seed: 11, stream: 3 };
        let via_struct = field.realize(g).unwrap();
        let via_fn = sample_field(g, 4, 0.5, 11, 3).unwrap();
        for (a, b) in via_struct.samples().iter().zip(via_fn.samples()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
        }
        assert_eq!(field.selected_count(1), selected_count(1, 4, 0.5, 11, 3));
        assert_eq!(field.selector(9), cube_selector(11, 3, 9, 0.5));
    }
}
