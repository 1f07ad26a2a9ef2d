//! Complex sample data over a [`Grid`], tagged by which side of the Fourier
//! transform it lives on.

use crate::grid::MAX_DIM;
use crate::sum::{NeumaierSumComplex, NeumaierSum};
use crate::{CoreError, Grid, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Which side of the transform the samples represent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Space {
    /// Samples `f(x_i)` at physical nodes `x_i = -L + i·h`.
    Physical,
    /// Samples `f̂(ξ_k)` at centered frequencies `ξ_k = (i - M/2)/(2L)`.
    Frequency,
}

/// Value of a grid integral together with an error estimate.
///
/// The estimate is only populated when a refined companion field was
/// supplied; otherwise it is zero and flagged unestimated.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub estimated: bool,
}

/// Complex data on a grid, row-major with axis 0 slowest.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: Grid,
    space: Space,
    data: Vec<Complex64>,
}

impl Field {
    pub fn zeros(grid: Grid, space: Space) -> Self {
        let n = grid.total_points();
        Self {
            grid,
            space,
            data: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// Sample a function of the node coordinates (physical or frequency,
    /// according to `space`).
    pub fn from_fn(grid: Grid, space: Space, mut f: impl FnMut(&[f64]) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(grid.total_points());
        let mut coords = [0.0f64; MAX_DIM];
        for flat in 0..grid.total_points() {
            match space {
                Space::Physical => grid.coords_of(flat, &mut coords[..grid.dim()]),
                Space::Frequency => grid.freq_coords_of(flat, &mut coords[..grid.dim()]),
            }
            data.push(f(&coords[..grid.dim()]));
        }
        Self { grid, space, data }
    }

    /// Wrap an existing buffer; its length must match the grid.
    pub fn from_data(grid: Grid, space: Space, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != grid.total_points() {
            return Err(CoreError::Mismatch(format!(
                "buffer has {} entries, grid needs {}",
                data.len(),
                grid.total_points()
            )));
        }
        Ok(Self { grid, space, data })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    /// Reinterpret the same buffer under a different space tag (no scaling).
    pub fn with_space(mut self, space: Space) -> Self {
        self.space = space;
        self
    }

    /// Reinterpret the buffer over a different grid of identical size.
    pub fn with_grid(mut self, grid: Grid, space: Space) -> Result<Self> {
        if grid.total_points() != self.data.len() {
            return Err(CoreError::Mismatch(format!(
                "grid needs {} entries, buffer has {}",
                grid.total_points(),
                self.data.len()
            )));
        }
        self.grid = grid;
        self.space = space;
        Ok(self)
    }

    /// Measure of one cell on this side: `h^d` or `(1/2L)^d`.
    pub fn cell_measure(&self) -> f64 {
        match self.space {
            Space::Physical => self.grid.cell_volume(),
            Space::Frequency => self.grid.freq_cell_volume(),
        }
    }

    fn check_compatible(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid || self.space != other.space {
            return Err(CoreError::Mismatch(
                "fields must share grid and space".into(),
            ));
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Field {
        Field {
            grid: self.grid,
            space: self.space,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Field {
        self.map(|z| z * c)
    }

    pub fn conj(&self) -> Field {
        self.map(|z| z.conj())
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.check_compatible(other)?;
        Ok(Field {
            grid: self.grid,
            space: self.space,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.check_compatible(other)?;
        Ok(Field {
            grid: self.grid,
            space: self.space,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        })
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Field) -> Result<Field> {
        self.check_compatible(other)?;
        Ok(Field {
            grid: self.grid,
            space: self.space,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a * b)
                .collect(),
        })
    }

    /// Riemann sum of the samples times the cell measure.
    pub fn integrate(&self) -> Complex64 {
        let mut acc = NeumaierSumComplex::new();
        for &z in &self.data {
            acc.add(z);
        }
        acc.value() * self.cell_measure()
    }

    /// [`integrate`](Self::integrate) wrapped with an unestimated error field.
    pub fn integrate_result(&self) -> QuadratureResult {
        QuadratureResult {
            value: self.integrate(),
            abs_error_estimate: 0.0,
            estimated: false,
        }
    }

    /// Integral with the error estimated as the difference against the same
    /// quantity on a refined grid (same extent, more points per axis).
    pub fn integrate_with_refined(&self, refined: &Field) -> Result<QuadratureResult> {
        if refined.grid.dim() != self.grid.dim()
            || refined.grid.half_width() != self.grid.half_width()
            || refined.grid.points_per_axis() <= self.grid.points_per_axis()
            || refined.space != self.space
        {
            return Err(CoreError::Mismatch(
                "error estimation needs a finer grid of the same extent and space".into(),
            ));
        }
        let coarse = self.integrate();
        let fine = refined.integrate();
        Ok(QuadratureResult {
            value: coarse,
            abs_error_estimate: (coarse - fine).norm(),
            estimated: true,
        })
    }

    /// `∫ f·g` (no conjugation), as a cell-measure-weighted sum.
    pub fn pairing(&self, other: &Field) -> Result<Complex64> {
        self.check_compatible(other)?;
        let mut acc = NeumaierSumComplex::new();
        for (&a, &b) in self.data.iter().zip(&other.data) {
            acc.add(a * b);
        }
        Ok(acc.value() * self.cell_measure())
    }

    /// Largest sample magnitude.
    pub fn sup_norm(&self) -> f64 {
        let mut m = 0.0f64;
        for &z in &self.data {
            m = m.max(z.norm());
        }
        m
    }

    /// `(∫ |f|^p)^{1/p}` with the cell measure of this side.
    pub fn lp_norm(&self, p: f64) -> f64 {
        assert!(p > 0.0 && p.is_finite());
        let mut acc = NeumaierSum::new();
        for &z in &self.data {
            acc.add(z.norm().powf(p));
        }
        (acc.value() * self.cell_measure()).powf(1.0 / p)
    }

    pub fn l2_norm(&self) -> f64 {
        let mut acc = NeumaierSum::new();
        for &z in &self.data {
            acc.add(z.norm_sqr());
        }
        (acc.value() * self.cell_measure()).sqrt()
    }

    /// Evaluate the band-limited interpolant `Σ_k f̂(ξ_k) e^{2πi⟨ξ_k,x⟩} / (2L)^d`
    /// at an arbitrary physical point.  Requires frequency-side data.  At grid
    /// nodes this agrees with the inverse transform exactly.
    pub fn eval_trig(&self, x: &[f64]) -> Result<Complex64> {
        if self.space != Space::Frequency {
            return Err(CoreError::Mismatch(
                "trigonometric evaluation needs frequency-side data".into(),
            ));
        }
        if x.len() != self.grid.dim() {
            return Err(CoreError::Mismatch(format!(
                "point has {} coordinates, grid dimension is {}",
                x.len(),
                self.grid.dim()
            )));
        }
        let m = self.grid.points_per_axis();
        let d = self.grid.dim();
        // Per-axis phase tables e^{2πi ξ_k x_a}.
        let mut tables: Vec<Vec<Complex64>> = Vec::with_capacity(d);
        for a in 0..d {
            let mut t = Vec::with_capacity(m);
            for i in 0..m {
                let phase = TAU * self.grid.freq_coord(i) * x[a];
                t.push(Complex64::new(phase.cos(), phase.sin()));
            }
            tables.push(t);
        }
        let mut acc = NeumaierSumComplex::new();
        let mut multi = [0usize; MAX_DIM];
        for flat in 0..self.grid.total_points() {
            self.grid.decode_index(flat, &mut multi[..d]);
            let mut w = self.data[flat];
            for a in 0..d {
                w *= tables[a][multi[a]];
            }
            acc.add(w);
        }
        Ok(acc.value() * self.grid.freq_cell_volume())
    }

    /// Frequency-side realization of translation by `shift`: multiplies
    /// `f̂(ξ)` by `e^{-2πi⟨shift,ξ⟩}`, so the physical field moves to
    /// `f(x - shift)` for band-limited data.
    pub fn translate_frequency(&self, shift: &[f64]) -> Result<Field> {
        if self.space != Space::Frequency {
            return Err(CoreError::Mismatch(
                "translation acts on frequency-side data".into(),
            ));
        }
        if shift.len() != self.grid.dim() {
            return Err(CoreError::Mismatch(
                "shift dimension must match grid dimension".into(),
            ));
        }
        let d = self.grid.dim();
        let m = self.grid.points_per_axis();
        let mut tables: Vec<Vec<Complex64>> = Vec::with_capacity(d);
        for a in 0..d {
            let mut t = Vec::with_capacity(m);
            for i in 0..m {
                let phase = -TAU * self.grid.freq_coord(i) * shift[a];
                t.push(Complex64::new(phase.cos(), phase.sin()));
            }
            tables.push(t);
        }
        let mut out = self.clone();
        let mut multi = [0usize; MAX_DIM];
        for flat in 0..self.grid.total_points() {
            self.grid.decode_index(flat, &mut multi[..d]);
            for a in 0..d {
                out.data[flat] *= tables[a][multi[a]];
            }
        }
        Ok(out)
    }

    /// Tensor product of `m` fields on a common `n`-dimensional grid, laid out
    /// with factor 0 slowest: the result lives on the `m·n`-dimensional grid
    /// with the same per-axis geometry.
    pub fn tensor(factors: &[&Field]) -> Result<Field> {
        let m = factors.len();
        if m == 0 {
            return Err(CoreError::InvalidParameter(
                "tensor product needs at least one factor".into(),
            ));
        }
        let base = factors[0];
        for f in factors.iter().skip(1) {
            base.check_compatible(f)?;
        }
        let n = base.grid.dim();
        let big = base.grid.with_dim(m * n)?;
        let block = base.grid.total_points();
        let mut data = Vec::with_capacity(big.total_points());
        // Row-major over block digits: digit j of `flat` in base `block`
        // addresses factor j, factor 0 most significant.
        let mut digits = vec![0usize; m];
        for _flat in 0..big.total_points() {
            let mut w = Complex64::new(1.0, 0.0);
            for (j, &dj) in digits.iter().enumerate() {
                w *= factors[j].data[dj];
            }
            data.push(w);
            for j in (0..m).rev() {
                digits[j] += 1;
                if digits[j] < block {
                    break;
                }
                digits[j] = 0;
            }
        }
        Field::from_data(big, base.space, data)
    }

    /// Restriction of an `m·n`-dimensional field to the diagonal
    /// `(x, x, …, x)`, producing an `n`-dimensional field.
    pub fn diagonal_restrict(&self, m: usize) -> Result<Field> {
        let big_dim = self.grid.dim();
        if m == 0 || big_dim % m != 0 {
            return Err(CoreError::InvalidParameter(format!(
                "dimension {big_dim} is not a multiple of factor count {m}"
            )));
        }
        let n = big_dim / m;
        let small = self.grid.with_dim(n)?;
        let block = small.total_points();
        // Flat index with all m block digits equal to t is t · Σ block^j.
        let mut stride = 0usize;
        let mut pw = 1usize;
        for _ in 0..m {
            stride += pw;
            pw *= block;
        }
        let data = (0..block).map(|t| self.data[t * stride]).collect();
        Field::from_data(small, self.space, data)
    }
}
