//! Dyadic cubes on the torus and their exact grid realizations.
//!
//! The level-`n` dyadic cubes are the `2^{nd}` half-open boxes
//! `Π_i [j_i 2^{-n}, (j_i+1) 2^{-n})` with `j_i ∈ {0, …, 2^n - 1}`. When
//! `n ≤ J` each cube contains exactly `2^{(J-n)d}` grid samples, so the
//! Riemann sum of its indicator equals the exact measure `2^{-nd}`.

use super::{Grid, GridFunction};
use crate::error::{Error, Result};

/// A dyadic cube identified by its level and per-axis indices
/// (second index zero in one dimension).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DyadicCube {
    /// Dyadic level `n`; side length is `2^{-n}`.
    pub level: u32,
    /// Per-axis cube indices in `{0, …, 2^n - 1}`.
    pub index: [usize; 2],
}

impl DyadicCube {
    /// Side length `2^{-n}`.
    pub fn side(&self) -> f64 {
        0.5f64.powi(self.level as i32)
    }

    /// Lower-left corner.
    pub fn corner(&self) -> [f64; 2] {
        let s = self.side();
        [self.index[0] as f64 * s, self.index[1] as f64 * s]
    }

    /// Center point.
    pub fn center(&self) -> [f64; 2] {
        let s = self.side();
        [
            (self.index[0] as f64 + 0.5) * s,
            (self.index[1] as f64 + 0.5) * s,
        ]
    }

    /// Measure `2^{-nd}`.
    pub fn measure(&self, d: u8) -> f64 {
        0.5f64.powi((self.level * d as u32) as i32)
    }

    /// Linear enumeration index among all cubes of this level (row-major
    /// over the per-axis indices).
    pub fn linear_index(&self, d: u8) -> usize {
        let per_axis = 1usize << self.level;
        if d == 1 {
            self.index[0]
        } else {
            self.index[0] * per_axis + self.index[1]
        }
    }
}

/// Validate that level-`n` cubes are resolvable on `grid` (`n ≤ J`).
pub fn check_level(grid: Grid, level: u32) -> Result<()> {
    if level > grid.j() {
        return Err(Error::resolution(format!(
            "dyadic level {level} exceeds grid exponent {}; cubes would be sub-sample",
            grid.j()
        )));
    }
    Ok(())
}

/// Number of level-`n` cubes, `2^{nd}`.
pub fn cube_count(d: u8, level: u32) -> usize {
    1usize << (level * d as u32)
}

/// Enumerate all cubes of a level in linear-index order.
pub fn cubes_at_level(d: u8, level: u32) -> impl Iterator<Item = DyadicCube> {
    let per_axis = 1usize << level;
    let total = cube_count(d, level);
    (0..total).map(move |c| DyadicCube {
        level,
        index: if d == 1 { [c, 0] } else { [c / per_axis, c % per_axis] },
    })
}

/// The cube of a given level containing a point of `[0,1)^d`.
pub fn cube_containing(d: u8, level: u32, x: [f64; 2]) -> DyadicCube {
    let per_axis = 1usize << level;
    let locate = |t: f64| -> usize {
        let t = t.rem_euclid(1.0);
        // Half-open boxes: x = j·2^{-n} belongs to cube j.
        ((t * per_axis as f64).floor() as usize).min(per_axis - 1)
    };
    DyadicCube {
        level,
        index: [locate(x[0]), if d == 2 { locate(x[1]) } else { 0 }],
    }
}

/// Per-axis range of grid sample indices inside a cube: `[start, end)`.
pub fn axis_sample_range(grid: Grid, cube: &DyadicCube, axis: usize) -> (usize, usize) {
    let stride = 1usize << (grid.j() - cube.level);
    let start = cube.index[axis] * stride;
    (start, start + stride)
}

/// Iterate the linear grid-sample indices inside a cube.
pub fn cube_sample_indices(grid: Grid, cube: &DyadicCube) -> Vec<usize> {
    let (s0, e0) = axis_sample_range(grid, cube, 0);
    match grid.d() {
        1 => (s0..e0).collect(),
        _ => {
            let (s1, e1) = axis_sample_range(grid, cube, 1);
            let mut out = Vec::with_capacity((e0 - s0) * (e1 - s1));
            for i0 in s0..e0 {
                for i1 in s1..e1 {
                    out.push(grid.index_of([i0, i1]));
                }
            }
            out
        }
    }
}

/// Exact grid indicator of a dyadic cube.
pub fn cube_indicator(grid: Grid, cube: &DyadicCube) -> Result<GridFunction> {
    check_level(grid, cube.level)?;
    let mut samples = vec![0.0f64; grid.total()];
    for idx in cube_sample_indices(grid, cube) {
        samples[idx] = 1.0;
    }
    GridFunction::from_real(grid, samples)
}
