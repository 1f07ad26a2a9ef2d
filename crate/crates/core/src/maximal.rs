//! Power-mean Hardy–Littlewood maximal averages over grid-aligned cubes,
//! and the shifted-weight profile built on top of them.
//!
//! The cube family searched is: all axis-aligned cubes made of `S` consecutive
//! cells per axis (periodic wrap), for `S` drawn from a validated size set.
//! A point belongs to a cube when its cell is among the cube's cells.  The
//! single-cell cube is always searched, which forces `M_r f ≥ |f|` pointwise.

use crate::grid::MAX_DIM;
use crate::lorentz::Rearrangement;
use crate::sum::NeumaierSum;
use crate::{fft, CoreError, Field, Grid, Result, Space};
use num_complex::Complex64;
use std::collections::VecDeque;

/// Validated maximal-average configuration: the power `r` in the mean and
/// the cube sizes searched, in cells per side.
#[derive(Clone, Debug)]
pub struct MaximalConfig {
    r: f64,
    sizes: Vec<usize>,
}

impl MaximalConfig {
    /// Build from cube half-widths in physical units.  Each half-width `w`
    /// must correspond to a whole number of cells (`2w/h` integral), the list
    /// must be nonempty, strictly ascending, and bounded by the domain
    /// half-width.  The single-cell size is always added.
    pub fn new(r: f64, radius_set: &[f64], grid: &Grid) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(CoreError::InvalidParameter(format!(
                "power must be positive, got {r}"
            )));
        }
        if radius_set.is_empty() {
            return Err(CoreError::InvalidParameter(
                "cube size set must be nonempty".into(),
            ));
        }
        let h = grid.spacing();
        let m = grid.points_per_axis();
        let mut sizes = vec![1usize];
        let mut prev = 0.0f64;
        for &w in radius_set {
            if w <= prev {
                return Err(CoreError::InvalidParameter(
                    "cube half-widths must be strictly ascending".into(),
                ));
            }
            prev = w;
            if w > grid.half_width() {
                return Err(CoreError::InvalidParameter(format!(
                    "cube half-width {w} exceeds domain half-width {}",
                    grid.half_width()
                )));
            }
            let cells = 2.0 * w / h;
            let s = cells.round();
            if (cells - s).abs() > 1e-9 * cells.max(1.0) || s < 1.0 {
                return Err(CoreError::InvalidParameter(format!(
                    "cube half-width {w} is not a whole number of cells"
                )));
            }
            let s = s as usize;
            if s > m {
                return Err(CoreError::InvalidParameter(format!(
                    "cube of {s} cells exceeds the {m}-cell axis"
                )));
            }
            if !sizes.contains(&s) {
                sizes.push(s);
            }
        }
        sizes.sort_unstable();
        Ok(Self { r, sizes })
    }

    /// Dyadic size family 1, 2, 4, …, M cells per side.
    pub fn dyadic(r: f64, grid: &Grid) -> Self {
        let m = grid.points_per_axis();
        let mut sizes = Vec::new();
        let mut s = 1usize;
        while s <= m {
            sizes.push(s);
            s *= 2;
        }
        Self { r, sizes }
    }

    /// Every size from one cell to the full axis.
    pub fn full(r: f64, grid: &Grid) -> Self {
        Self {
            r,
            sizes: (1..=grid.points_per_axis()).collect(),
        }
    }

    pub fn power(&self) -> f64 {
        self.r
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }
}

/// Sliding maximum of `a` (treated as circular) over windows of `len`
/// consecutive entries ending at each index; `out[i] = max a[i-len+1 ..= i]`.
fn circular_window_max(a: &[f64], len: usize, out: &mut [f64]) {
    let m = a.len();
    debug_assert!(len >= 1 && len <= m && out.len() == m);
    let mut deque: VecDeque<usize> = VecDeque::new();
    // Scan the doubled index range; emit results for the second copy, whose
    // windows wrap completely.
    for k in 0..2 * m {
        let v = a[k % m];
        while let Some(&back) = deque.back() {
            if a[back % m] <= v {
                deque.pop_back();
            } else {
                break;
            }
        }
        deque.push_back(k);
        while let Some(&front) = deque.front() {
            if front + len <= k {
                deque.pop_front();
            } else {
                break;
            }
        }
        if k >= m {
            out[k - m] = a[deque.front().copied().unwrap() % m];
        }
    }
}

/// Circular window sums of `len` consecutive entries starting at each index,
/// from a doubled prefix array: `out[j] = Σ a[j..j+len]` with wrap.
fn circular_window_sums(a: &[f64], len: usize, out: &mut [f64]) {
    let m = a.len();
    let mut prefix = vec![0.0f64; 2 * m + 1];
    for k in 0..2 * m {
        prefix[k + 1] = prefix[k] + a[k % m];
    }
    for j in 0..m {
        out[j] = prefix[j + len] - prefix[j];
    }
}

fn maximal_1d(g: &[f64], sizes: &[usize], best: &mut [f64]) {
    let m = g.len();
    let mut sums = vec![0.0f64; m];
    let mut maxes = vec![0.0f64; m];
    for &s in sizes {
        circular_window_sums(g, s, &mut sums);
        // A cube starting at j covers cells j..j+s-1; cubes containing cell i
        // are exactly the windows of s consecutive starts ending at i.
        circular_window_max(&sums, s, &mut maxes);
        let inv = 1.0 / s as f64;
        for i in 0..m {
            let avg = maxes[i] * inv;
            if avg > best[i] {
                best[i] = avg;
            }
        }
    }
}

fn maximal_2d(g: &[f64], m: usize, sizes: &[usize], best: &mut [f64]) {
    // Doubled summed-area table: sat[i][j] = Σ over rows < i, cols < j of the
    // wrapped data.
    let w = 2 * m + 1;
    let mut sat = vec![0.0f64; w * w];
    for i in 0..2 * m {
        for j in 0..2 * m {
            let v = g[(i % m) * m + (j % m)];
            sat[(i + 1) * w + (j + 1)] =
                v + sat[i * w + (j + 1)] + sat[(i + 1) * w + j] - sat[i * w + j];
        }
    }
    let mut block = vec![0.0f64; m * m];
    let mut rowmax = vec![0.0f64; m * m];
    let mut scratch_in = vec![0.0f64; m];
    let mut scratch_out = vec![0.0f64; m];
    for &s in sizes {
        for i in 0..m {
            for j in 0..m {
                block[i * m + j] = sat[(i + s) * w + (j + s)] - sat[i * w + (j + s)]
                    - sat[(i + s) * w + j]
                    + sat[i * w + j];
            }
        }
        // Separable max over the s×s set of covering starts: columns first,
        // then rows.
        for i in 0..m {
            circular_window_max(&block[i * m..(i + 1) * m], s, &mut rowmax[i * m..(i + 1) * m]);
        }
        let inv = 1.0 / (s * s) as f64;
        for j in 0..m {
            for i in 0..m {
                scratch_in[i] = rowmax[i * m + j];
            }
            circular_window_max(&scratch_in, s, &mut scratch_out);
            for i in 0..m {
                let avg = scratch_out[i] * inv;
                if avg > best[i * m + j] {
                    best[i * m + j] = avg;
                }
            }
        }
    }
}

fn maximal_direct(g: &[f64], grid: &Grid, sizes: &[usize], best: &mut [f64]) {
    let d = grid.dim();
    let m = grid.points_per_axis();
    let n = grid.total_points();
    let mut start = [0usize; MAX_DIM];
    let mut cell = [0usize; MAX_DIM];
    let mut offset = [0usize; MAX_DIM];
    for &s in sizes {
        let cube_cells = s.pow(d as u32);
        let inv = 1.0 / cube_cells as f64;
        for flat_start in 0..n {
            grid.decode_index(flat_start, &mut start[..d]);
            // Sum of the cube anchored at `start`.
            let mut sum = 0.0;
            offset[..d].fill(0);
            loop {
                for a in 0..d {
                    cell[a] = (start[a] + offset[a]) % m;
                }
                sum += g[grid.encode_index(&cell[..d])];
                let mut a = d;
                loop {
                    if a == 0 {
                        break;
                    }
                    a -= 1;
                    offset[a] += 1;
                    if offset[a] < s {
                        break;
                    }
                    offset[a] = 0;
                }
                if offset[..d].iter().all(|&o| o == 0) {
                    break;
                }
            }
            let avg = sum * inv;
            // Credit the average to every cell the cube covers.
            offset[..d].fill(0);
            loop {
                for a in 0..d {
                    cell[a] = (start[a] + offset[a]) % m;
                }
                let idx = grid.encode_index(&cell[..d]);
                if avg > best[idx] {
                    best[idx] = avg;
                }
                let mut a = d;
                loop {
                    if a == 0 {
                        break;
                    }
                    a -= 1;
                    offset[a] += 1;
                    if offset[a] < s {
                        break;
                    }
                    offset[a] = 0;
                }
                if offset[..d].iter().all(|&o| o == 0) {
                    break;
                }
            }
        }
    }
}

/// `M_r f`: at each point the largest `r`-power cell mean of `|f|` over
/// searched cubes containing the point, to the `1/r` power.
pub fn maximal_function(f: &Field, cfg: &MaximalConfig) -> Result<Field> {
    if f.space() != Space::Physical {
        return Err(CoreError::Mismatch(
            "maximal averages act on physical-side data".into(),
        ));
    }
    let grid = *f.grid();
    let r = cfg.r;
    let g: Vec<f64> = f
        .data()
        .iter()
        .map(|z| if r == 1.0 { z.norm() } else { z.norm().powf(r) })
        .collect();
    let mut best = vec![0.0f64; g.len()];
    match grid.dim() {
        1 => maximal_1d(&g, &cfg.sizes, &mut best),
        2 => maximal_2d(&g, grid.points_per_axis(), &cfg.sizes, &mut best),
        _ => maximal_direct(&g, &grid, &cfg.sizes, &mut best),
    }
    let data = best
        .into_iter()
        .map(|v| {
            let out = if r == 1.0 { v } else { v.powf(1.0 / r) };
            Complex64::new(out, 0.0)
        })
        .collect();
    Field::from_data(grid, Space::Physical, data)
}

/// Exhaustive reference implementation: enumerates every cube explicitly.
pub fn maximal_function_brute(f: &Field, cfg: &MaximalConfig) -> Result<Field> {
    if f.space() != Space::Physical {
        return Err(CoreError::Mismatch(
            "maximal averages act on physical-side data".into(),
        ));
    }
    let grid = *f.grid();
    let r = cfg.r;
    let g: Vec<f64> = f
        .data()
        .iter()
        .map(|z| if r == 1.0 { z.norm() } else { z.norm().powf(r) })
        .collect();
    let mut best = vec![0.0f64; g.len()];
    maximal_direct(&g, &grid, &cfg.sizes, &mut best);
    let data = best
        .into_iter()
        .map(|v| {
            let out = if r == 1.0 { v } else { v.powf(1.0 / r) };
            Complex64::new(out, 0.0)
        })
        .collect();
    Field::from_data(grid, Space::Physical, data)
}

/// Weak-norm profile of the shifted, weighted field
/// `y ↦ f(x − y/2^k) · (1+4π²|y|²)^{−s/2}`, measured in `L^{d/s,∞}`.
///
/// The shift is evaluated by trigonometric interpolation (the field extends
/// periodically); the weight uses the raw, non-periodized coordinate.
pub fn shifted_weight_profile(f: &Field, x: &[usize], k: i32, s: f64) -> Result<f64> {
    if f.space() != Space::Physical {
        return Err(CoreError::Mismatch(
            "the shifted-weight profile takes physical-side data".into(),
        ));
    }
    let grid = *f.grid();
    let d = grid.dim();
    if x.len() != d {
        return Err(CoreError::Mismatch(
            "base point dimension must match the grid".into(),
        ));
    }
    if !(s > 0.0 && s < d as f64) {
        return Err(CoreError::InvalidParameter(format!(
            "weight order must satisfy 0 < s < {d}, got {s}"
        )));
    }
    let spectrum = fft::forward(f)?;
    let scale = (2.0f64).powi(-k);
    let mut xc = [0.0f64; MAX_DIM];
    for a in 0..d {
        xc[a] = grid.coord(x[a]);
    }
    let mut point = [0.0f64; MAX_DIM];
    let mut yc = [0.0f64; MAX_DIM];
    let mut mags = Vec::with_capacity(grid.total_points());
    for flat in 0..grid.total_points() {
        grid.coords_of(flat, &mut yc[..d]);
        let mut nsq = 0.0;
        for a in 0..d {
            point[a] = xc[a] - yc[a] * scale;
            nsq += yc[a] * yc[a];
        }
        let shifted = spectrum.eval_trig(&point[..d])?;
        mags.push(shifted.norm() * crate::bessel::bessel_weight(nsq, -s / 2.0));
    }
    Rearrangement::from_magnitudes(mags, grid.cell_volume())?
        .lorentz_norm(d as f64 / s, f64::INFINITY)
}

/// ℓ^q-then-L^p norm of a family of fields sharing one grid:
/// `‖ (Σ_k |g_k|^q)^{1/q} ‖_{L^p}`.  Used by vector-valued inequality checks.
pub fn lp_lq_norm(fields: &[Field], p: f64, q: f64) -> Result<f64> {
    let first = fields
        .first()
        .ok_or_else(|| CoreError::InvalidParameter("empty family".into()))?;
    let grid = *first.grid();
    for f in fields {
        if f.grid() != &grid || f.space() != first.space() {
            return Err(CoreError::Mismatch("family must share grid and space".into()));
        }
    }
    let mut acc = NeumaierSum::new();
    for flat in 0..grid.total_points() {
        let mut inner = NeumaierSum::new();
        for f in fields {
            inner.add(f.data()[flat].norm().powf(q));
        }
        acc.add(inner.value().powf(p / q));
    }
    Ok((acc.value() * first.cell_measure()).powf(1.0 / p))
}
