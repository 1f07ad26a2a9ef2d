//! Bessel potentials `(I−Δ)^{±s/2}` and Lorentz–Sobolev norms.
//!
//! With the transform convention `f̂(ξ) = ∫ f e^{-2πi⟨x,ξ⟩}`, the Laplacian
//! has symbol `-4π²|ξ|²`, so `(I−Δ)^{s/2}` multiplies the spectrum by
//! `(1+4π²|ξ|²)^{s/2}`.

use crate::grid::MAX_DIM;
use crate::{fft, lorentz, CoreError, Field, Result, Space};

/// Whether to apply the smoothing-inverse weight `(1+4π²|ξ|²)^{+s/2}`
/// (`Forward`) or the smoothing weight with exponent `−s/2` (`Inverse`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PotentialDirection {
    Forward,
    Inverse,
}

/// Spectral weight `(1+4π²ρ²)^{e}` at squared radius `ρ²`.
#[inline]
pub fn bessel_weight(xi_norm_sq: f64, exponent: f64) -> f64 {
    let tau_sq = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
    (1.0 + tau_sq * xi_norm_sq).powf(exponent)
}

/// `(I−Δ)^{±s/2} f`.  Physical fields round-trip through the transform;
/// frequency fields are weighted in place.  The space tag is preserved.
pub fn bessel_potential(f: &Field, s: f64, direction: PotentialDirection) -> Result<Field> {
    if !(s.is_finite() && s >= 0.0) {
        return Err(CoreError::InvalidParameter(format!(
            "smoothness order must be a nonnegative real, got {s}"
        )));
    }
    let exponent = match direction {
        PotentialDirection::Forward => s / 2.0,
        PotentialDirection::Inverse => -s / 2.0,
    };
    let apply_weight = |spectrum: &Field| -> Field {
        let grid = *spectrum.grid();
        let d = grid.dim();
        let mut out = spectrum.clone();
        let mut multi = [0usize; MAX_DIM];
        for flat in 0..grid.total_points() {
            grid.decode_index(flat, &mut multi[..d]);
            let mut nsq = 0.0;
            for &i in &multi[..d] {
                let xi = grid.freq_coord(i);
                nsq += xi * xi;
            }
            out.data_mut()[flat] *= bessel_weight(nsq, exponent);
        }
        out
    };
    match f.space() {
        Space::Frequency => Ok(apply_weight(f)),
        Space::Physical => fft::inverse(&apply_weight(&fft::forward(f)?)),
    }
}

/// `‖f‖_{L^{p,q}_s} = ‖(I−Δ)^{s/2} f‖_{L^{p,q}}` for a physical-side field.
pub fn lorentz_sobolev_norm(f: &Field, s: f64, p: f64, q: f64) -> Result<f64> {
    if f.space() != Space::Physical {
        return Err(CoreError::Mismatch(
            "smoothness norms act on physical-side data".into(),
        ));
    }
    let smoothed = bessel_potential(f, s, PotentialDirection::Forward)?;
    lorentz::lorentz_norm(&smoothed, p, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::adaptive_simpson;
    use crate::Grid;
    use num_complex::Complex64;
    use std::f64::consts::{PI, TAU};

    fn gaussian_field(grid: Grid) -> Field {
        Field::from_fn(grid, Space::Physical, |x| {
            let nsq: f64 = x.iter().map(|v| v * v).sum();
            Complex64::new((-PI * nsq).exp(), 0.0)
        })
    }

    #[test]
    fn zero_order_is_identity() {
        let g = Grid::new(1, 32, 2.0).unwrap();
        let f = gaussian_field(g);
        let out = bessel_potential(&f, 0.0, PotentialDirection::Forward).unwrap();
        for (a, b) in f.data().iter().zip(out.data()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn forward_then_inverse_is_identity() {
        let g = Grid::new(2, 16, 2.0).unwrap();
        let f = gaussian_field(g);
        let up = bessel_potential(&f, 1.7, PotentialDirection::Forward).unwrap();
        let back = bessel_potential(&up, 1.7, PotentialDirection::Inverse).unwrap();
        for (a, b) in f.data().iter().zip(back.data()) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn orders_compose_additively() {
        let g = Grid::new(1, 64, 4.0).unwrap();
        let f = gaussian_field(g);
        let two_step = bessel_potential(
            &bessel_potential(&f, 0.9, PotentialDirection::Forward).unwrap(),
            1.4,
            PotentialDirection::Forward,
        )
        .unwrap();
        let one_step = bessel_potential(&f, 2.3, PotentialDirection::Forward).unwrap();
        for (a, b) in two_step.data().iter().zip(one_step.data()) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn characters_are_eigenfunctions() {
        let g = Grid::new(1, 32, 2.0).unwrap();
        let xi0 = 0.75; // on-grid frequency (3 · 1/4)
        let f = Field::from_fn(g, Space::Physical, |x| {
            let ph = TAU * xi0 * x[0];
            Complex64::new(ph.cos(), ph.sin())
        });
        let s = 1.1;
        let out = bessel_potential(&f, s, PotentialDirection::Forward).unwrap();
        let lambda = bessel_weight(xi0 * xi0, s / 2.0);
        for (a, b) in out.data().iter().zip(f.data()) {
            assert!((a - b * lambda).norm() < 1e-10);
        }
    }

    #[test]
    fn gaussian_value_matches_quadrature() {
        // ((I−Δ)^{s/2} e^{−π|·|²})(0) = ∫ (1+4π²ξ²)^{s/2} e^{−πξ²} dξ in 1-d.
        let g = Grid::new(1, 256, 8.0).unwrap();
        let f = gaussian_field(g);
        let s = 1.3;
        let out = bessel_potential(&f, s, PotentialDirection::Forward).unwrap();
        let at_zero = out.data()[128]; // x = 0 is index M/2
        let oracle = adaptive_simpson(-8.0, 8.0, 1e-12, &|xi: f64| {
            bessel_weight(xi * xi, s / 2.0) * (-PI * xi * xi).exp()
        });
        assert!(
            (at_zero.re - oracle).abs() < 1e-6 && at_zero.im.abs() < 1e-10,
            "{at_zero} vs {oracle}"
        );
    }

    #[test]
    fn l2_sobolev_norm_matches_plancherel_form() {
        let g = Grid::new(1, 64, 3.0).unwrap();
        let f = gaussian_field(g);
        let norm = lorentz_sobolev_norm(&f, 1.0, 2.0, 2.0).unwrap();
        // Direct spectral sum Σ (1+4π²ξ²)|f̂|² · freq cell measure.
        let fh = fft::forward(&f).unwrap();
        let mut acc = 0.0;
        for i in 0..64 {
            let xi = fh.grid().freq_coord(i);
            acc += bessel_weight(xi * xi, 1.0) * fh.data()[i].norm_sqr();
        }
        let expect = (acc * fh.grid().freq_cell_volume()).sqrt();
        assert!((norm - expect).abs() < 1e-10 * expect);
    }
}
