//! Maximal functions: the weighted (Peetre-type) maximal function, the
//! geometric (Hardy–Littlewood-type) cube-averaged maximal function, the
//! plain windowed supremum, and the dyadic ring maximal hierarchy.
//!
//! All spatial geometry is periodic: distances are torus distances.

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};
use std::ops::RangeInclusive;

/// `sup_y |f(x+y)| / (1 + r·|y|)^σ` over the whole torus (periodic `|y|`).
///
/// Exact by default. `tail_tol ∈ [0,1)` optionally truncates the scan at
/// the radius beyond which the neglected weights are provably below
/// `tail_tol` *relative to the output* (the uniform floor
/// `out(x) ≥ sup|f| · (1 + r·√d/2)^{-σ}` makes the truncation sound);
/// `tail_tol = 0` disables truncation. An early-exit criterion — stop once
/// the remaining weights times the global maximum cannot beat the current
/// candidate — is exact and always active.
pub fn peetre_maximal(f: &GridFunction, sigma: f64, r: f64, tail_tol: f64) -> Result<GridFunction> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::parameter(format!("weight exponent must be > 0, got {sigma}")));
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::parameter(format!("weight scale must be > 0, got {r}")));
    }
    if !(0.0..1.0).contains(&tail_tol) {
        return Err(Error::parameter(format!(
            "tail tolerance must lie in [0, 1), got {tail_tol}"
        )));
    }
    let grid = f.grid();
    let mags = f.abs_samples();
    let global = mags.iter().cloned().fold(0.0f64, f64::max);
    if global == 0.0 {
        return GridFunction::from_real(grid, vec![0.0; grid.total()]);
    }

    // Distance cap from the tail tolerance (periodic diameter otherwise).
    let d_sqrt = (grid.d() as f64).sqrt();
    let max_dist = d_sqrt * 0.5;
    let cap = if tail_tol > 0.0 {
        let floor_w = (1.0 + r * max_dist).powf(-sigma);
        // (1 + r·ρ)^{-σ} ≤ tail_tol · floor_w  ⇔  ρ ≥ ((tail_tol·floor_w)^{-1/σ} - 1)/r
        (((tail_tol * floor_w).powf(-sigma.recip()) - 1.0) / r).min(max_dist)
    } else {
        max_dist
    };

    let out = match grid.d() {
        1 => peetre_1d(grid, &mags, sigma, r, global, cap),
        _ => peetre_2d(grid, &mags, sigma, r, global, cap),
    };
    GridFunction::from_real(grid, out)
}

fn peetre_1d(grid: Grid, mags: &[f64], sigma: f64, r: f64, global: f64, cap: f64) -> Vec<f64> {
    let n = grid.n();
    let h = grid.spacing();
    let max_c = ((cap / h).floor() as usize).min(n / 2);
    // Weight of a |c|-cell displacement.
    let weights: Vec<f64> = (0..=max_c).map(|c| (1.0 + r * c as f64 * h).powf(-sigma)).collect();

    // Sparse path: with few nonzero samples, scan the support per point.
    let support: Vec<usize> = (0..n).filter(|&i| mags[i] > 0.0).collect();
    if support.len() <= n / 8 {
        return (0..n)
            .map(|x| {
                let mut best = 0.0f64;
                for &y in &support {
                    let c = {
                        let diff = if x >= y { x - y } else { y - x };
                        diff.min(n - diff)
                    };
                    if c <= max_c {
                        let cand = mags[y] * weights[c];
                        if cand > best {
                            best = cand;
                        }
                    }
                }
                best
            })
            .collect();
    }

    (0..n)
        .map(|x| {
            let mut best = mags[x]; // c = 0 term, weight 1
            for c in 1..=max_c {
                let w = weights[c];
                if w * global <= best {
                    break; // no farther point can win: weights decrease
                }
                let a = mags[(x + c) % n];
                let b = mags[(x + n - c) % n];
                let m = a.max(b) * w;
                if m > best {
                    best = m;
                }
            }
            best
        })
        .collect()
}

fn peetre_2d(grid: Grid, mags: &[f64], sigma: f64, r: f64, global: f64, cap: f64) -> Vec<f64> {
    let n = grid.n() as i64;
    let h = grid.spacing();
    let total = grid.total();
    // All displacement classes up to the cap, sorted by distance. Offsets
    // are stored per distance class so the early exit covers whole rings.
    let max_c = ((cap / h).floor() as i64).min(n / 2);
    let mut classes: Vec<(f64, Vec<(i64, i64)>)> = Vec::new();
    {
        let mut buf: Vec<(i64, (i64, i64))> = Vec::new();
        for a in -max_c..=max_c {
            for b in -max_c..=max_c {
                let d2 = a * a + b * b;
                if d2 == 0 {
                    continue;
                }
                if ((d2 as f64).sqrt() * h) <= cap {
                    buf.push((d2, (a, b)));
                }
            }
        }
        buf.sort_unstable_by_key(|e| e.0);
        let mut last_d2 = -1i64;
        for (d2, off) in buf {
            if d2 == last_d2 {
                classes.last_mut().unwrap().1.push(off);
            } else {
                classes.push(((d2 as f64).sqrt() * h, vec![off]));
                last_d2 = d2;
            }
        }
    }
    let weights: Vec<f64> = classes.iter().map(|(d, _)| (1.0 + r * d).powf(-sigma)).collect();

    let support: Vec<usize> = (0..total).filter(|&i| mags[i] > 0.0).collect();
    if support.len() <= total / 8 {
        return (0..total)
            .map(|x| {
                let xa = grid.axes_of(x);
                let mut best = 0.0f64;
                for &y in &support {
                    let ya = grid.axes_of(y);
                    let da = {
                        let t = (xa[0] as i64 - ya[0] as i64).rem_euclid(n);
                        t.min(n - t)
                    };
                    let db = {
                        let t = (xa[1] as i64 - ya[1] as i64).rem_euclid(n);
                        t.min(n - t)
                    };
                    let dist = ((da * da + db * db) as f64).sqrt() * h;
                    if dist <= cap {
                        let cand = mags[y] * (1.0 + r * dist).powf(-sigma);
                        if cand > best {
                            best = cand;
                        }
                    }
                }
                best
            })
            .collect();
    }

    (0..total)
        .map(|x| {
            let xa = grid.axes_of(x);
            let mut best = mags[x];
            for (ci, (_, offs)) in classes.iter().enumerate() {
                let w = weights[ci];
                if w * global <= best {
                    break;
                }
                for &(a, b) in offs {
                    let ia = (xa[0] as i64 + a).rem_euclid(n) as usize;
                    let ib = (xa[1] as i64 + b).rem_euclid(n) as usize;
                    let cand = mags[grid.index_of([ia, ib])] * w;
                    if cand > best {
                        best = cand;
                    }
                }
            }
            best
        })
        .collect()
}

/// Geometric maximal function: the largest average of `|f|` over centered
/// periodic cubes of dyadic side `2^{-l}`, `l = 0..=J` (side 1 is the whole
/// torus; side `2^{-J}` is the sample itself).
pub fn geometric_maximal(f: &GridFunction) -> Result<GridFunction> {
    let grid = f.grid();
    let mags = f.abs_samples();
    let n = grid.n();
    let out = match grid.d() {
        1 => {
            let mut best: Vec<f64> = {
                let mean = mags.iter().sum::<f64>() / n as f64;
                vec![mean; n]
            };
            // Periodic prefix sums for sliding window means (windows reach
            // up to x + n + half < 3n in extended coordinates).
            let mut prefix = vec![0.0f64; 3 * n + 1];
            for i in 0..3 * n {
                prefix[i + 1] = prefix[i] + mags[i % n];
            }
            for l in 1..=grid.j() {
                let half = if l == grid.j() { 0 } else { 1usize << (grid.j() - l - 1) };
                let count = (2 * half + 1) as f64;
                for x in 0..n {
                    let lo = x + n - half;
                    let hi = x + n + half;
                    let mean = (prefix[hi + 1] - prefix[lo]) / count;
                    if mean > best[x] {
                        best[x] = mean;
                    }
                }
            }
            best
        }
        _ => {
            let total = grid.total();
            let mut best = {
                let mean = mags.iter().sum::<f64>() / total as f64;
                vec![mean; total]
            };
            for l in 1..=grid.j() {
                let half = if l == grid.j() { 0 } else { 1usize << (grid.j() - l - 1) };
                let count = ((2 * half + 1) * (2 * half + 1)) as f64;
                // Separable periodic window sums: rows, then columns.
                let row_sums = sliding_sum_rows(&mags, n, half);
                let col_sums = sliding_sum_cols(&row_sums, n, half);
                for idx in 0..total {
                    let mean = col_sums[idx] / count;
                    if mean > best[idx] {
                        best[idx] = mean;
                    }
                }
            }
            best
        }
    };
    GridFunction::from_real(grid, out)
}

fn sliding_sum_rows(data: &[f64], n: usize, half: usize) -> Vec<f64> {
    let mut out = vec![0.0f64; data.len()];
    let mut prefix = vec![0.0f64; 3 * n + 1];
    for row in 0..n {
        let base = row * n;
        for i in 0..3 * n {
            prefix[i + 1] = prefix[i] + data[base + i % n];
        }
        for x in 0..n {
            out[base + x] = prefix[x + n + half + 1] - prefix[x + n - half];
        }
    }
    out
}

fn sliding_sum_cols(data: &[f64], n: usize, half: usize) -> Vec<f64> {
    let mut out = vec![0.0f64; data.len()];
    let mut prefix = vec![0.0f64; 3 * n + 1];
    for col in 0..n {
        for i in 0..3 * n {
            prefix[i + 1] = prefix[i] + data[(i % n) * n + col];
        }
        for x in 0..n {
            out[x * n + col] = prefix[x + n + half + 1] - prefix[x + n - half];
        }
    }
    out
}

/// Plain windowed supremum `sup_{|h| ≤ radius} |f(x+h)|` over the closed
/// periodic Euclidean ball. Requires `radius ≤ 1/2` (the window must fit
/// the torus).
pub fn windowed_maximal(f: &GridFunction, radius: f64) -> Result<GridFunction> {
    if !(radius.is_finite() && radius >= 0.0 && radius <= 0.5) {
        return Err(Error::parameter(format!(
            "window radius must lie in [0, 1/2], got {radius}"
        )));
    }
    let grid = f.grid();
    let mags = f.abs_samples();
    let n = grid.n();
    let cells = ((radius / grid.spacing()) + 1e-12).floor() as usize;
    let out = match grid.d() {
        1 => sliding_max_periodic(&mags, n, cells),
        _ => {
            // Precomputed ball offsets.
            let c = cells as i64;
            let mut offs = Vec::new();
            for a in -c..=c {
                for b in -c..=c {
                    if ((a * a + b * b) as f64).sqrt() * grid.spacing() <= radius + 1e-12 {
                        offs.push((a, b));
                    }
                }
            }
            let ni = n as i64;
            (0..grid.total())
                .map(|idx| {
                    let ax = grid.axes_of(idx);
                    offs.iter()
                        .map(|&(a, b)| {
                            let ia = (ax[0] as i64 + a).rem_euclid(ni) as usize;
                            let ib = (ax[1] as i64 + b).rem_euclid(ni) as usize;
                            mags[grid.index_of([ia, ib])]
                        })
                        .fold(0.0f64, f64::max)
                })
                .collect()
        }
    };
    GridFunction::from_real(grid, out)
}

/// Windowed infimum `inf_{|h| ≤ radius} |f(x+h)|` over the closed periodic
/// Euclidean ball — the counterpart of [`windowed_maximal`].
pub fn windowed_minimal(f: &GridFunction, radius: f64) -> Result<GridFunction> {
    if !(radius.is_finite() && radius >= 0.0 && radius <= 0.5) {
        return Err(Error::parameter(format!(
            "window radius must lie in [0, 1/2], got {radius}"
        )));
    }
    let grid = f.grid();
    let mags = f.abs_samples();
    let n = grid.n();
    let cells = ((radius / grid.spacing()) + 1e-12).floor() as i64;
    let mut offs = Vec::new();
    let lim = if grid.d() == 1 { 0 } else { cells };
    for a in -cells..=cells {
        for b in -lim..=lim {
            if ((a * a + b * b) as f64).sqrt() * grid.spacing() <= radius + 1e-12 {
                offs.push((a, b));
            }
        }
    }
    let ni = n as i64;
    let out: Vec<f64> = (0..grid.total())
        .map(|idx| {
            let ax = grid.axes_of(idx);
            offs
                .iter()
                .map(|&(a, b)| {
                    let ia = (ax[0] as i64 + a).rem_euclid(ni) as usize;
                    let ib = (ax[1] as i64 + b).rem_euclid(ni) as usize;
                    mags[grid.index_of([ia, ib])]
                })
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    GridFunction::from_real(grid, out)
}

/// Monotone-deque sliding maximum over `[i-w, i+w]`, periodic.
fn sliding_max_periodic(data: &[f64], n: usize, w: usize) -> Vec<f64> {
    if w == 0 {
        return data.to_vec();
    }
    let len = n + 2 * w;
    // Extended view: index i in [0, len) maps to data[(i + n - w) mod n].
    let get = |i: usize| data[(i + n - (w % n)) % n];
    let mut deque: std::collections::VecDeque<usize> = std::collections::VecDeque::new();
    let mut out = vec![0.0f64; n];
    for i in 0..len {
        while let Some(&back) = deque.back() {
            if get(back) <= get(i) {
                deque.pop_back();
            } else {
                break;
            }
        }
        deque.push_back(i);
        // Window covering output x = i - 2w .. translated: output index o has
        // extended window [o, o + 2w]; emit once i >= 2w.
        if i >= 2 * w {
            let o = i - 2 * w;
            while let Some(&front) = deque.front() {
                if front < o {
                    deque.pop_front();
                } else {
                    break;
                }
            }
            if o < n {
                out[o] = get(*deque.front().unwrap());
            }
        }
    }
    out
}

/// Result of the ring maximal hierarchy.
pub struct RingLayers {
    /// Per-`j` layer functions, in ascending `j`.
    pub layers: Vec<(u32, GridFunction)>,
    /// Set when some requested ring was empty (both cubes degenerate to the
    /// full torus); those layers are identically zero.
    pub had_empty_rings: bool,
}

/// Dyadic ring maximal hierarchy: layer `j` holds, at each `x`,
/// `sup { |f(y)| : y ∈ Q^j(x) \ Q^{j-1}(x) }` where `Q^j(x)` is the dyadic
/// cube of side `2^{-base_level+j}` containing `x` (clamped to the whole
/// torus once the side reaches 1).
pub fn ring_maximal(
    f: &GridFunction,
    base_level: u32,
    j_range: RangeInclusive<u32>,
) -> Result<RingLayers> {
    let grid = f.grid();
    if base_level > grid.j() {
        return Err(Error::resolution(format!(
            "base level {base_level} exceeds grid exponent {}",
            grid.j()
        )));
    }
    let (j_lo, j_hi) = (*j_range.start(), *j_range.end());
    if j_lo < 1 || j_lo > j_hi {
        return Err(Error::parameter(format!("ring range must satisfy 1 <= lo <= hi, got {j_lo}..={j_hi}")));
    }
    let mags = f.abs_samples();
    let d = grid.d();

    // Cube maxima per level, from the grid level J down to level 0.
    // cube_max[λ] has 2^{λd} entries (row-major cube indices).
    let levels = grid.j() as usize;
    let mut cube_max: Vec<Vec<f64>> = Vec::with_capacity(levels + 1);
    cube_max.resize(levels + 1, Vec::new());
    // Level-J cubes are single samples; 2D cube order coincides with the
    // row-major sample order.
    cube_max[levels] = mags.clone();
    for lam in (0..levels).rev() {
        let per_axis = 1usize << lam;
        let child_axis = per_axis << 1;
        let mut v = vec![0.0f64; 1usize << (lam as u32 * d as u32)];
        let child = &cube_max[lam + 1];
        match d {
            1 => {
                for (i, slot) in v.iter_mut().enumerate() {
                    *slot = child[2 * i].max(child[2 * i + 1]);
                }
            }
            _ => {
                for a in 0..per_axis {
                    for b in 0..per_axis {
                        let mut m = 0.0f64;
                        for da in 0..2 {
                            for db in 0..2 {
                                m = m.max(child[(2 * a + da) * child_axis + 2 * b + db]);
                            }
                        }
                        v[a * per_axis + b] = m;
                    }
                }
            }
        }
        cube_max[lam] = v;
    }

    let cube_of = |idx: usize, level: usize| -> usize {
        let ax = grid.axes_of(idx);
        let shift = grid.j() as usize - level;
        match d {
            1 => ax[0] >> shift,
            _ => (ax[0] >> shift) * (1usize << level) + (ax[1] >> shift),
        }
    };

    let mut layers = Vec::new();
    let mut had_empty = false;
    for j in j_lo..=j_hi {
        let level_big = base_level as i64 - j as i64;
        let level_child = level_big + 1;
        let values: Vec<f64> = if level_child <= 0 {
            // Both cubes are the full torus: the ring is empty.
            had_empty = true;
            vec![0.0; grid.total()]
        } else if level_big < 0 {
            // Big cube is the torus; ring = torus minus the child cube.
            // max over all child-level cubes except one = top-2 trick.
            let lc = level_child as usize;
            let arr = &cube_max[lc];
            let (mut top1, mut top2) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
            let mut top1_at = usize::MAX;
            for (i, &v) in arr.iter().enumerate() {
                if v > top1 {
                    top2 = top1;
                    top1 = v;
                    top1_at = i;
                } else if v > top2 {
                    top2 = v;
                }
            }
            (0..grid.total())
                .map(|idx| {
                    let c = cube_of(idx, lc);
                    if c == top1_at {
                        if top2 == f64::NEG_INFINITY {
                            0.0
                        } else {
                            top2
                        }
                    } else {
                        top1
                    }
                })
                .collect()
        } else {
            // Max over the 2^d - 1 siblings of the child inside the big cube.
            let lc = level_child as usize;
            let arr = &cube_max[lc];
            let child_axis = 1usize << lc;
            (0..grid.total())
                .map(|idx| {
                    let child = cube_of(idx, lc);
                    let mut best = 0.0f64;
                    match d {
                        1 => {
                            let parent_first = (child >> 1) << 1;
                            for s in parent_first..parent_first + 2 {
                                if s != child {
                                    best = best.max(arr[s]);
                                }
                            }
                        }
                        _ => {
                            let ca = child / child_axis;
                            let cb = child % child_axis;
                            let pa = (ca >> 1) << 1;
                            let pb = (cb >> 1) << 1;
                            for da in 0..2 {
                                for db in 0..2 {
                                    let s = (pa + da) * child_axis + (pb + db);
                                    if s != child {
                                        best = best.max(arr[s]);
                                    }
                                }
                            }
                        }
                    }
                    best
                })
                .collect()
        };
        layers.push((j, GridFunction::from_real(grid, values)?));
    }
    Ok(RingLayers { layers, had_empty_rings: had_empty })
}
