//! Uniform periodic grids on `[-L, L)^d` and their frequency lattices.

use crate::{CoreError, Result};
use serde::{Deserialize, Serialize};

/// Hard cap on the total number of grid points, `M^dim ≤ 2^26`.
pub const MAX_TOTAL_POINTS: usize = 1 << 26;

/// Largest supported dimension (physical dimensions n and joint dimensions
/// m·n both stay within this).
pub const MAX_DIM: usize = 4;

/// A uniformly discretized periodic cube `[-L, L)^d`.
///
/// Physical nodes along each axis are `x_i = -L + i·h` for `i = 0..M` with
/// `h = 2L/M`.  The matching frequency lattice is centered: position `i`
/// stores wavenumber `k = i - M/2`, i.e. frequency `ξ_k = k / (2L)`, covering
/// `k = -M/2 .. M/2 - 1`.
///
/// Multi-dimensional data over the grid is stored row-major with axis 0
/// slowest.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    points_per_axis: usize,
    half_width: f64,
}

impl Grid {
    /// Build a grid, validating dimension, parity, size cap, and extent.
    pub fn new(dim: usize, points_per_axis: usize, half_width: f64) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(CoreError::InvalidGrid(format!(
                "dimension must lie in 1..={MAX_DIM}, got {dim}"
            )));
        }
        if points_per_axis < 8 || points_per_axis % 2 != 0 {
            return Err(CoreError::InvalidGrid(format!(
                "points per axis must be even and at least 8, got {points_per_axis}"
            )));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(CoreError::InvalidGrid(format!(
                "half width must be positive and finite, got {half_width}"
            )));
        }
        let mut total: usize = 1;
        for _ in 0..dim {
            total = total.checked_mul(points_per_axis).unwrap_or(usize::MAX);
            if total > MAX_TOTAL_POINTS {
                return Err(CoreError::InvalidGrid(format!(
                    "{points_per_axis}^{dim} exceeds the {MAX_TOTAL_POINTS}-point cap"
                )));
            }
        }
        Ok(Self {
            dim,
            points_per_axis,
            half_width,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Physical mesh width `h = 2L/M`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points_per_axis as f64
    }

    /// Frequency mesh width `1/(2L)`.
    pub fn freq_spacing(&self) -> f64 {
        1.0 / (2.0 * self.half_width)
    }

    /// Largest representable frequency magnitude per axis, `M/(4L)`.
    pub fn nyquist(&self) -> f64 {
        self.points_per_axis as f64 / (4.0 * self.half_width)
    }

    /// Total number of nodes `M^dim`.
    pub fn total_points(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    /// Volume of one physical cell, `h^dim`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Volume of one frequency cell, `(1/(2L))^dim`.
    pub fn freq_cell_volume(&self) -> f64 {
        self.freq_spacing().powi(self.dim as i32)
    }

    /// Physical coordinate of axis position `i`: `-L + i·h`.
    pub fn coord(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    /// Centered wavenumber at axis position `i`: `k = i - M/2`.
    pub fn wavenumber(&self, i: usize) -> i64 {
        i as i64 - (self.points_per_axis / 2) as i64
    }

    /// Frequency coordinate at axis position `i`: `(i - M/2)/(2L)`.
    pub fn freq_coord(&self, i: usize) -> f64 {
        self.wavenumber(i) as f64 * self.freq_spacing()
    }

    /// Axis position holding wavenumber `k`, if representable.
    pub fn position_of_wavenumber(&self, k: i64) -> Option<usize> {
        let half = (self.points_per_axis / 2) as i64;
        if (-half..half).contains(&k) {
            Some((k + half) as usize)
        } else {
            None
        }
    }

    /// Row-major flatten with axis 0 slowest.
    pub fn encode_index(&self, multi: &[usize]) -> usize {
        debug_assert_eq!(multi.len(), self.dim);
        let mut flat = 0usize;
        for &i in multi {
            debug_assert!(i < self.points_per_axis);
            flat = flat * self.points_per_axis + i;
        }
        flat
    }

    /// Inverse of [`encode_index`](Self::encode_index).
    pub fn decode_index(&self, flat: usize, multi: &mut [usize]) {
        debug_assert_eq!(multi.len(), self.dim);
        let mut rest = flat;
        for a in (0..self.dim).rev() {
            multi[a] = rest % self.points_per_axis;
            rest /= self.points_per_axis;
        }
        debug_assert_eq!(rest, 0);
    }

    /// Physical coordinates of a flat index.
    pub fn coords_of(&self, flat: usize, out: &mut [f64]) {
        let mut multi = [0usize; MAX_DIM];
        self.decode_index(flat, &mut multi[..self.dim]);
        for a in 0..self.dim {
            out[a] = self.coord(multi[a]);
        }
    }

    /// Frequency coordinates of a flat index.
    pub fn freq_coords_of(&self, flat: usize, out: &mut [f64]) {
        let mut multi = [0usize; MAX_DIM];
        self.decode_index(flat, &mut multi[..self.dim]);
        for a in 0..self.dim {
            out[a] = self.freq_coord(multi[a]);
        }
    }

    /// Euclidean norm of the frequency vector at a flat index.
    pub fn freq_norm_of(&self, flat: usize) -> f64 {
        let mut multi = [0usize; MAX_DIM];
        self.decode_index(flat, &mut multi[..self.dim]);
        let mut s = 0.0;
        for a in 0..self.dim {
            let xi = self.freq_coord(multi[a]);
            s += xi * xi;
        }
        s.sqrt()
    }

    /// The frequency lattice viewed as a physical grid in its own right:
    /// same point count per axis, half width equal to the Nyquist frequency,
    /// so its mesh width equals this grid's frequency spacing.
    pub fn frequency_reinterpretation(&self) -> Grid {
        Grid {
            dim: self.dim,
            points_per_axis: self.points_per_axis,
            half_width: self.nyquist(),
        }
    }

    /// Same spacing and extent, different dimension (used for tensor grids).
    /// Fails if the size cap would be exceeded.
    pub fn with_dim(&self, dim: usize) -> Result<Grid> {
        Grid::new(dim, self.points_per_axis, self.half_width)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_arithmetic() {
        let g = Grid::new(1, 16, 2.0).unwrap();
        assert_eq!(g.spacing(), 0.25);
        assert_eq!(g.freq_spacing(), 0.25);
        assert_eq!(g.nyquist(), 2.0);
        assert_eq!(g.coord(0), -2.0);
        assert_eq!(g.wavenumber(0), -8);
        assert_eq!(g.wavenumber(8), 0);
        assert_eq!(g.freq_coord(8), 0.0);
        assert_eq!(g.position_of_wavenumber(0), Some(8));
        assert_eq!(g.position_of_wavenumber(8), None);
        assert_eq!(g.position_of_wavenumber(-8), Some(0));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Grid::new(0, 16, 1.0).is_err());
        assert!(Grid::new(5, 8, 1.0).is_err());
        assert!(Grid::new(1, 6, 1.0).is_err());
        assert!(Grid::new(1, 15, 1.0).is_err());
        assert!(Grid::new(1, 16, 0.0).is_err());
        assert!(Grid::new(1, 16, -1.0).is_err());
        assert!(Grid::new(1, 16, f64::NAN).is_err());
        // 512^4 = 2^36 blows the cap; 512^2 = 2^18 is fine.
        assert!(Grid::new(4, 512, 1.0).is_err());
        assert!(Grid::new(2, 512, 1.0).is_ok());
        // 2^26 exactly at the cap.
        assert!(Grid::new(1, 1 << 26, 1.0).is_ok());
        assert!(Grid::new(2, 1 << 13, 1.0).is_ok());
    }

    #[test]
    fn index_round_trip() {
        let g = Grid::new(3, 8, 1.0).unwrap();
        let mut multi = [0usize; 3];
        for flat in 0..g.total_points() {
            g.decode_index(flat, &mut multi);
            assert_eq!(g.encode_index(&multi), flat);
        }
        // Axis 0 is slowest.
        g.decode_index(7, &mut multi);
        assert_eq!(multi, [0, 0, 7]);
        g.decode_index(64, &mut multi);
        assert_eq!(multi, [1, 0, 0]);
    }

    #[test]
    fn frequency_reinterpretation_spacing() {
        let g = Grid::new(2, 64, 8.0).unwrap();
        let fg = g.frequency_reinterpretation();
        assert_eq!(fg.half_width(), g.nyquist());
        assert_eq!(fg.spacing(), g.freq_spacing());
        assert_eq!(fg.points_per_axis(), g.points_per_axis());
    }
}
