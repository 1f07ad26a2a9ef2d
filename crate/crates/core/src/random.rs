//! Deterministic seeded generators for experiment inputs.
//!
//! Every generator derives its stream from `(seed, label)` through a fixed
//! hash, so a scenario re-run with the same seed reproduces its inputs
//! byte-for-byte regardless of which other generators ran before it.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::fft;
use crate::{CoreError, Field, Grid, Result, Space};

/// Bump to invalidate all previously published expected values at once.
const VERSION_TAG: &str = "gen-v1";

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stream keyed by the seed, a free-form label, and the generator version.
pub fn seeded(seed: u64, label: &str) -> ChaCha8Rng {
    let mut state = seed ^ fnv1a(label.as_bytes()) ^ fnv1a(VERSION_TAG.as_bytes());
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Standard complex Gaussian (independent real and imaginary parts).
pub fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    // Box–Muller on two uniforms; the log argument is kept away from zero.
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = std::f64::consts::TAU * u2;
    Complex64::new(r * theta.cos(), r * theta.sin())
}

/// Random smooth periodic field with spectrum confined to
/// `|ξ_axis| ≤ band_fraction · nyquist` on every axis, normalized to unit
/// `L²` norm.  Returned on the physical side.
pub fn band_limited_field(
    grid: Grid,
    band_fraction: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Field> {
    if !(band_fraction > 0.0 && band_fraction <= 1.0) {
        return Err(CoreError::InvalidParameter(format!(
            "band fraction must lie in (0, 1], got {band_fraction}"
        )));
    }
    let cutoff = band_fraction * grid.nyquist() + 1e-12;
    let mut spectrum = Field::zeros(grid, Space::Frequency);
    let total = grid.total_points();
    let dim = grid.dim();
    let mut ks = vec![0.0; dim];
    let mut active = 0usize;
    for idx in 0..total {
        grid.freq_coords_of(idx, &mut ks);
        let in_band = (0..dim).all(|a| ks[a].abs() <= cutoff);
        if in_band {
            let value = complex_gaussian(rng);
            spectrum.data_mut()[idx] = value;
            active += 1;
        }
    }
    if active == 0 {
        return Err(CoreError::InvalidParameter(
            "band excludes every grid frequency".into(),
        ));
    }
    let norm_sq: f64 = spectrum.data().iter().map(|z| z.norm_sqr()).sum::<f64>()
        * grid.freq_cell_volume();
    let scale = norm_sq.sqrt().recip();
    let spectrum = spectrum.scale(Complex64::new(scale, 0.0));
    fft::inverse(&spectrum)
}
