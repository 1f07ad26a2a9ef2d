//! Discrete realization of the continuum Fourier transform
//! `f̂(ξ) = ∫ f(x) e^{-2πi⟨x,ξ⟩} dx` on periodic grids.
//!
//! With physical nodes `x_i = -L + i·h` and centered frequencies
//! `ξ_k = k/(2L)`, the Riemann sum of the integral factorizes per axis as
//! `h · (-1)^k · (raw DFT)`, because `e^{-2πi ξ_k x_i} = (-1)^k e^{-2πi ki/M}`.
//! The inverse applies the same algebra backwards with weight `1/(2L)` per
//! axis.  Round trips are exact to rounding; band-limited continuum pairs are
//! reproduced exactly because the Riemann sum of a trigonometric polynomial
//! below the Nyquist frequency equals its integral.

use crate::grid::MAX_DIM;
use crate::{CoreError, Field, Result, Space};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;
use std::sync::Arc;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, forward: bool) -> Arc<dyn rustfft::Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if forward {
            p.plan_fft_forward(len)
        } else {
            p.plan_fft_inverse(len)
        }
    })
}

/// `(-1)^k` for the wavenumber stored at centered position `i` (`k = i - M/2`).
#[inline]
fn alternating_sign(i: usize, half: usize) -> f64 {
    if (i + half) & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Apply a closure to every 1-d lane along `axis` of a row-major buffer.
fn for_each_lane(
    data: &mut [Complex64],
    m: usize,
    dim: usize,
    axis: usize,
    scratch: &mut [Complex64],
    mut f: impl FnMut(&mut [Complex64]),
) {
    let stride = m.pow((dim - 1 - axis) as u32);
    let outer_step = stride * m;
    let outer_count = data.len() / outer_step;
    for outer in 0..outer_count {
        for inner in 0..stride {
            let base = outer * outer_step + inner;
            for t in 0..m {
                scratch[t] = data[base + t * stride];
            }
            f(scratch);
            for t in 0..m {
                data[base + t * stride] = scratch[t];
            }
        }
    }
}

/// Forward transform: physical samples to frequency samples.
pub fn forward(f: &Field) -> Result<Field> {
    if f.space() != Space::Physical {
        return Err(CoreError::Mismatch(
            "forward transform expects physical-side data".into(),
        ));
    }
    let grid = *f.grid();
    let m = grid.points_per_axis();
    let half = m / 2;
    let h = grid.spacing();
    let fft = plan(m, true);
    let mut data = f.data().to_vec();
    let mut scratch = vec![Complex64::new(0.0, 0.0); m];
    let mut reorder = vec![Complex64::new(0.0, 0.0); m];
    for axis in 0..grid.dim() {
        for_each_lane(&mut data, m, grid.dim(), axis, &mut scratch, |lane| {
            fft.process(lane);
            for i in 0..m {
                reorder[i] = lane[(i + half) % m] * (h * alternating_sign(i, half));
            }
            lane.copy_from_slice(&reorder);
        });
    }
    Field::from_data(grid, Space::Frequency, data)
}

/// Inverse transform: frequency samples to physical samples.
pub fn inverse(f: &Field) -> Result<Field> {
    if f.space() != Space::Frequency {
        return Err(CoreError::Mismatch(
            "inverse transform expects frequency-side data".into(),
        ));
    }
    let grid = *f.grid();
    let m = grid.points_per_axis();
    let half = m / 2;
    let fs = grid.freq_spacing();
    let fft = plan(m, false);
    let mut data = f.data().to_vec();
    let mut scratch = vec![Complex64::new(0.0, 0.0); m];
    let mut reorder = vec![Complex64::new(0.0, 0.0); m];
    for axis in 0..grid.dim() {
        for_each_lane(&mut data, m, grid.dim(), axis, &mut scratch, |lane| {
            for i in 0..m {
                reorder[(i + half) % m] = lane[i] * alternating_sign(i, half);
            }
            lane.copy_from_slice(&reorder);
            fft.process(lane);
            for z in lane.iter_mut() {
                *z *= fs;
            }
        });
    }
    Field::from_data(grid, Space::Physical, data)
}

/// Convolution via the spectral product `f̂·ĝ`.  On the grid this equals the
/// mesh-weighted periodic convolution computed by [`convolve_direct`] exactly.
pub fn convolve(f: &Field, g: &Field) -> Result<Field> {
    if f.space() != Space::Physical || g.space() != Space::Physical {
        return Err(CoreError::Mismatch(
            "convolution expects physical-side data".into(),
        ));
    }
    let fh = forward(f)?;
    let gh = forward(g)?;
    inverse(&fh.mul(&gh)?)
}

/// Literal `h^d`-weighted periodic convolution
/// `(f∗g)(x_t) = h^d Σ_i f(x_i) g(x_{t-i})` with coordinate wrap into
/// `[-L, L)^d`.  Quadratic cost; reference implementation for small grids.
pub fn convolve_direct(f: &Field, g: &Field) -> Result<Field> {
    if f.grid() != g.grid() || f.space() != Space::Physical || g.space() != Space::Physical {
        return Err(CoreError::Mismatch(
            "convolution expects physical-side data on a shared grid".into(),
        ));
    }
    let grid = *f.grid();
    let m = grid.points_per_axis();
    let half = m / 2;
    let d = grid.dim();
    let n = grid.total_points();
    let weight = grid.cell_volume();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let mut ti = [0usize; MAX_DIM];
    let mut si = [0usize; MAX_DIM];
    let mut wi = [0usize; MAX_DIM];
    for (t, out_t) in out.iter_mut().enumerate() {
        grid.decode_index(t, &mut ti[..d]);
        let mut acc = crate::sum::NeumaierSumComplex::new();
        for s in 0..n {
            grid.decode_index(s, &mut si[..d]);
            // x_t - x_s wraps to the node with axis position (t - s + M/2) mod M.
            for a in 0..d {
                wi[a] = (ti[a] + m + half - si[a]) % m;
            }
            acc.add(f.data()[s] * g.data()[grid.encode_index(&wi[..d])]);
        }
        *out_t = acc.value() * weight;
    }
    Field::from_data(grid, Space::Physical, out)
}
