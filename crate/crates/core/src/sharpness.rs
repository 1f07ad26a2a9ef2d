//! Sharpness laboratory: slowly decaying radial kernels with logarithmic
//! corrections, smooth truncation windows, the thin annular symbols they
//! induce, modulated wave-packet inputs, and the growth and integrability
//! experiments built from them.
//!
//! The radial machinery lives in the plane: the closed quadrature route uses
//! the order-zero Hankel transform, which is the planar radial Fourier
//! transform, so everything that touches it requires `m·n = 2`.

use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

use num_complex::Complex64;

use crate::lp::{eta_window, gamma_profile, psi_hat};
use crate::quadrature::{composite_gauss_legendre, radial_fourier_2d};
use crate::sum::NeumaierSumComplex;
use crate::symbol::{dilate_symbol, symbol_sobolev_norm, MultiplierSymbol, SymbolFn};
use crate::{fft, CoreError, Field, Grid, Result, Space};

/// Inner radius of the shaping annulus carried by every annular symbol.
pub const ANNULUS_LO: f64 = 0.99;
/// Outer radius of the shaping annulus.
pub const ANNULUS_HI: f64 = 1.01;
/// Minimum number of frequency cells the annulus width must span.
pub const MIN_ANNULUS_CELLS: f64 = 8.0;
/// Number of radii tabulated when the annular spectrum is precomputed.
pub const SPECTRUM_TABLE_POINTS: usize = 101;

/// Half-width of the wave-packet host box (2²¹), chosen so that packets with
/// spectral width down to a few frequency cells still fit their core inside
/// the box with a large margin.
pub const PACKET_HALF_WIDTH: f64 = 2_097_152.0;
/// Points per axis of the packet envelope grid.
pub const PACKET_POINTS: usize = 512;
/// Envelope spectral radius times `√m`: each packet's envelope spectrum is
/// supported in `|ξ| ≤ ε · PACKET_BANDWIDTH_BASE / √m`.
pub const PACKET_BANDWIDTH_BASE: f64 = 5e-4;
/// Largest admissible packet scale parameter `ε`.
pub const PACKET_EPS_MAX: f64 = 1.0 / 32.0;

/// Decision margin for the octave-slope integrability classifier.
pub const OCTAVE_SLOPE_MARGIN: f64 = 0.05;
/// Decision margin for the shell-slope spectrum classifier.
pub const SHELL_SLOPE_MARGIN: f64 = 0.04;
/// Critical-branch boundary: a fitted log-log exponent at or above this value
/// means the shell series diverges.
pub const CRITICAL_SLOPE_BOUNDARY: f64 = -1.0;

// ---------------------------------------------------------------------------
// Parameters.
// ---------------------------------------------------------------------------

/// Which experimental regime a parameter set claims to realize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Sub-critical integrability exponent: the lower curve grows like a
    /// small power of the truncation radius.
    Case1,
    /// Critical integrability exponent: the lower curve grows like a power
    /// of the logarithm of the truncation radius.
    Case2,
    /// Integrable kernel: the lower curve saturates to a finite limit.
    Control,
}

/// Exponent bundle for the sharpness experiments.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessParams {
    pub m: usize,
    pub n: usize,
    pub s: f64,
    pub r: f64,
    pub q: f64,
    pub t: f64,
    pub gamma: f64,
    pub p_list: Vec<f64>,
    pub regime: Regime,
}

impl SharpnessParams {
    /// Power-growth preset.
    pub fn case1() -> Self {
        Self {
            m: 2,
            n: 1,
            s: 1.2,
            r: 1.5,
            q: 2.0,
            t: 1.9,
            gamma: 1.0,
            p_list: vec![4.0, 4.0],
            regime: Regime::Case1,
        }
    }

    /// Logarithmic-growth preset: `r` sits exactly at `mn/s` and `t` at `mn`.
    pub fn case2() -> Self {
        Self {
            r: 2.0 / 1.2,
            t: 2.0,
            gamma: 1.5,
            regime: Regime::Case2,
            ..Self::case1()
        }
    }

    /// Saturating preset: `t` above `mn`, so the untruncated kernel mass is
    /// finite.
    pub fn control() -> Self {
        Self {
            r: 2.0 / 1.2,
            t: 2.3,
            gamma: 1.5,
            regime: Regime::Control,
            ..Self::case1()
        }
    }

    /// Product of the arity and the per-slot dimension, as a float.
    pub fn mn(&self) -> f64 {
        (self.m * self.n) as f64
    }

    /// Target exponent `p` with `1/p = Σ 1/p_j`.
    pub fn target_exponent(&self) -> f64 {
        1.0 / self.p_list.iter().map(|p| 1.0 / p).sum::<f64>()
    }

    /// Check positivity, ranges, and the regime-defining inequalities.
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 {
            return Err(CoreError::InvalidParameter(
                "arity and slot dimension must be positive".into(),
            ));
        }
        let mn = self.mn();
        for (name, v) in [
            ("s", self.s),
            ("r", self.r),
            ("q", self.q),
            ("t", self.t),
            ("gamma", self.gamma),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CoreError::InvalidParameter(format!(
                    "{name} must be a positive finite real, got {v}"
                )));
            }
        }
        if self.s >= mn {
            return Err(CoreError::InvalidParameter(format!(
                "smoothness s must lie in (0, {mn}), got {}",
                self.s
            )));
        }
        if self.p_list.len() != self.m {
            return Err(CoreError::Mismatch(format!(
                "need {} input exponents, got {}",
                self.m,
                self.p_list.len()
            )));
        }
        for &p in &self.p_list {
            if !(p.is_finite() && p > 1.0) {
                return Err(CoreError::InvalidParameter(format!(
                    "input exponents must be finite and > 1, got {p}"
                )));
            }
        }
        let critical_r = mn / self.s;
        match self.regime {
            Regime::Case1 => {
                if self.r >= critical_r {
                    return Err(CoreError::InvalidParameter(format!(
                        "case1 needs r < mn/s = {critical_r}, got {}",
                        self.r
                    )));
                }
                let t_lo = mn - (mn / self.r - self.s);
                if !(self.t > t_lo && self.t < mn) {
                    return Err(CoreError::InvalidParameter(format!(
                        "case1 needs t in ({t_lo}, {mn}), got {}",
                        self.t
                    )));
                }
            }
            Regime::Case2 => {
                if (self.r - critical_r).abs() > 1e-9 * critical_r {
                    return Err(CoreError::InvalidParameter(format!(
                        "case2 needs r = mn/s = {critical_r}, got {}",
                        self.r
                    )));
                }
                if self.q <= 1.0 {
                    return Err(CoreError::InvalidParameter(format!(
                        "case2 needs q > 1, got {}",
                        self.q
                    )));
                }
                if (self.t - mn).abs() > 1e-9 * mn {
                    return Err(CoreError::InvalidParameter(format!(
                        "case2 needs t = mn = {mn}, got {}",
                        self.t
                    )));
                }
                if !(self.gamma > 2.0 / self.q && self.gamma <= 2.0) {
                    return Err(CoreError::InvalidParameter(format!(
                        "case2 needs gamma in ({}, 2], got {}",
                        2.0 / self.q,
                        self.gamma
                    )));
                }
            }
            Regime::Control => {
                if self.t <= mn {
                    return Err(CoreError::InvalidParameter(format!(
                        "control needs t > mn = {mn}, got {}",
                        self.t
                    )));
                }
            }
        }
        Ok(())
    }
}

fn ensure_planar(params: &SharpnessParams) -> Result<()> {
    if params.m * params.n != 2 {
        return Err(CoreError::Precondition(format!(
            "the radial quadrature route needs m·n = 2, got {}",
            params.m * params.n
        )));
    }
    Ok(())
}

fn ensure_annulus_resolved(grid: &Grid) -> Result<()> {
    if grid.dim() != 2 {
        return Err(CoreError::Precondition(format!(
            "annular symbols live on a 2-dimensional frequency grid, got dim {}",
            grid.dim()
        )));
    }
    let cells = (ANNULUS_HI - ANNULUS_LO) / grid.freq_spacing();
    if cells < MIN_ANNULUS_CELLS {
        return Err(CoreError::Precondition(format!(
            "the annulus [{ANNULUS_LO}, {ANNULUS_HI}] spans {cells:.2} frequency cells; \
             need at least {MIN_ANNULUS_CELLS}"
        )));
    }
    if grid.nyquist() < ANNULUS_HI {
        return Err(CoreError::Precondition(format!(
            "annulus outer radius {ANNULUS_HI} exceeds the Nyquist radius {}",
            grid.nyquist()
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Kernel and window.
// ---------------------------------------------------------------------------

/// Radial kernel `(1+4π²ρ²)^{-t/2} · (1+ln(1+4π²ρ²))^{-γ/2}`.
pub fn kernel_value(rho: f64, t: f64, gamma: f64) -> f64 {
    let u = 1.0 + 4.0 * PI * PI * rho * rho;
    u.powf(-t / 2.0) * (1.0 + u.ln()).powf(-gamma / 2.0)
}

/// Physical-side sampling of the radial kernel on a grid.
pub fn kernel_field(grid: Grid, t: f64, gamma: f64) -> Result<Field> {
    if !(t > 0.0 && gamma > 0.0 && t.is_finite() && gamma.is_finite()) {
        return Err(CoreError::InvalidParameter(format!(
            "kernel exponents must be positive finite, got t = {t}, gamma = {gamma}"
        )));
    }
    Ok(Field::from_fn(grid, Space::Physical, |x| {
        let rho = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        Complex64::new(kernel_value(rho, t, gamma), 0.0)
    }))
}

/// Truncation window `η(ρ/N)`: identically `1` for `ρ ≤ N/2`, `0` for
/// `ρ ≥ N`, smooth and nonincreasing in between.  The family is pointwise
/// nondecreasing in `N`.
pub fn window_value(rho: f64, n_scale: f64) -> f64 {
    eta_window(rho / n_scale)
}

/// Kernel times window, sampled on the physical side.  The window support
/// (radius `n_scale`) must fit inside the box.
pub fn windowed_kernel(grid: Grid, t: f64, gamma: f64, n_scale: f64) -> Result<Field> {
    if !(n_scale > 0.0 && n_scale.is_finite()) {
        return Err(CoreError::InvalidParameter(format!(
            "window radius must be positive finite, got {n_scale}"
        )));
    }
    if n_scale > grid.half_width() {
        return Err(CoreError::Precondition(format!(
            "window radius {n_scale} exceeds the domain half-width {}",
            grid.half_width()
        )));
    }
    let kernel = kernel_field(grid, t, gamma)?;
    let grid = *kernel.grid();
    let mut data = kernel.into_data();
    let mut x = [0.0f64; 4];
    for (idx, v) in data.iter_mut().enumerate() {
        grid.coords_of(idx, &mut x[..grid.dim()]);
        let rho = x[..grid.dim()].iter().map(|c| c * c).sum::<f64>().sqrt();
        *v *= window_value(rho, n_scale);
    }
    Field::from_data(grid, Space::Physical, data)
}

/// Planar mass of the windowed kernel: `2π ∫₀^N K(r) η(r/N) r dr`, computed
/// with unit-width fixed-node panels.  For integer radii the panel families
/// are nested and the integrand family is pointwise nondecreasing in `N`, so
/// the masses are nondecreasing in `N`.
pub fn truncated_kernel_mass(t: f64, gamma: f64, n_scale: f64) -> f64 {
    let panels = (n_scale.ceil() as usize).max(1);
    2.0 * PI
        * composite_gauss_legendre(0.0, n_scale, panels, |r| {
            kernel_value(r, t, gamma) * window_value(r, n_scale) * r
        })
}

// ---------------------------------------------------------------------------
// Radial spectrum of the windowed kernel.
// ---------------------------------------------------------------------------

/// Tabulated radial profile with linear interpolation between uniformly
/// spaced nodes; evaluation clamps to the end nodes.
#[derive(Debug, Clone)]
pub struct RadialSpectrumTable {
    radii: Vec<f64>,
    values: Vec<f64>,
}

impl RadialSpectrumTable {
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Piecewise-linear interpolation; radii outside the table clamp to the
    /// nearest end node.
    pub fn eval(&self, rho: f64) -> f64 {
        let first = self.radii[0];
        let last = *self.radii.last().expect("table is nonempty");
        if rho <= first {
            return self.values[0];
        }
        if rho >= last {
            return *self.values.last().expect("table is nonempty");
        }
        let step = (last - first) / (self.radii.len() - 1) as f64;
        let pos = (rho - first) / step;
        let i = (pos.floor() as usize).min(self.radii.len() - 2);
        let frac = pos - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }
}

/// Planar radial Fourier transform of the windowed kernel, tabulated at
/// `points` uniformly spaced radii in `[lo, hi]`.
pub fn windowed_kernel_spectrum_table(
    t: f64,
    gamma: f64,
    n_scale: f64,
    lo: f64,
    hi: f64,
    points: usize,
) -> Result<RadialSpectrumTable> {
    if !(t > 0.0 && gamma > 0.0 && n_scale > 0.0) {
        return Err(CoreError::InvalidParameter(
            "kernel exponents and window radius must be positive".into(),
        ));
    }
    if !(0.0 <= lo && lo < hi && hi.is_finite() && points >= 2) {
        return Err(CoreError::InvalidParameter(format!(
            "need 0 ≤ lo < hi and at least two radii, got [{lo}, {hi}] with {points}"
        )));
    }
    let step = (hi - lo) / (points - 1) as f64;
    let mut radii = Vec::with_capacity(points);
    let mut values = Vec::with_capacity(points);
    for i in 0..points {
        let rho = lo + step * i as f64;
        radii.push(rho);
        values.push(radial_fourier_2d(n_scale, rho, |r| {
            kernel_value(r, t, gamma) * window_value(r, n_scale)
        }));
    }
    Ok(RadialSpectrumTable { radii, values })
}

// ---------------------------------------------------------------------------
// Annular symbols.
// ---------------------------------------------------------------------------

/// Closed-form annular symbol `σ(ξ⃗) = Ŝ(|ξ⃗|) · Γ̂(|ξ⃗|)` built from a radial
/// spectrum table and the fixed annular plateau profile.  The support hint
/// is certified on construction.
pub fn annular_symbol_from_table(
    table: &RadialSpectrumTable,
    m: usize,
    n: usize,
    grid: Grid,
) -> Result<MultiplierSymbol> {
    ensure_annulus_resolved(&grid)?;
    let profile = gamma_profile();
    let table = table.clone();
    let f: SymbolFn = Arc::new(move |xi: &[f64]| {
        let rho = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        let shape = profile.eval(rho);
        if shape == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::new(table.eval(rho) * shape, 0.0)
    });
    MultiplierSymbol::from_closed_form(m, n, grid, f)?.with_support_hint(ANNULUS_LO, ANNULUS_HI)
}

/// Annular symbol via the quadrature route: radial spectrum table of the
/// windowed kernel, interpolated and shaped by the annular plateau profile.
/// Works for any window radius, including radii far beyond the box.
pub fn annular_symbol(
    params: &SharpnessParams,
    n_scale: f64,
    grid: Grid,
) -> Result<MultiplierSymbol> {
    params.validate()?;
    ensure_planar(params)?;
    let table = windowed_kernel_spectrum_table(
        params.t,
        params.gamma,
        n_scale,
        ANNULUS_LO,
        ANNULUS_HI,
        SPECTRUM_TABLE_POINTS,
    )?;
    annular_symbol_from_table(&table, params.m, params.n, grid)
}

/// Annular symbol via the transform route: window the kernel on the grid,
/// take the discrete forward transform, and shape by the annular plateau
/// profile.  Requires the window to fit inside the box; used to cross-check
/// the quadrature route.
pub fn annular_symbol_fft(
    params: &SharpnessParams,
    n_scale: f64,
    grid: Grid,
) -> Result<MultiplierSymbol> {
    params.validate()?;
    ensure_planar(params)?;
    ensure_annulus_resolved(&grid)?;
    let spectrum = fft::forward(&windowed_kernel(grid, params.t, params.gamma, n_scale)?)?;
    let profile = gamma_profile();
    let mut data = spectrum.into_data();
    for (idx, v) in data.iter_mut().enumerate() {
        *v *= profile.eval(grid.freq_norm_of(idx));
    }
    let values = Field::from_data(grid, Space::Frequency, data)?;
    MultiplierSymbol::from_samples(params.m, params.n, values)?
        .with_support_hint(ANNULUS_LO, ANNULUS_HI)
}

// ---------------------------------------------------------------------------
// Band norms and the growth sweep.
// ---------------------------------------------------------------------------

/// Smoothness norm of `σ(2^k·)` restricted to the fixed dyadic band: the
/// dilated symbol is multiplied by the radial band bump (support `(1/2, 2)`)
/// and measured in the smoothness norm with indices `(s, p, q)`.  When the
/// dilated support annulus misses the band entirely the result is exactly
/// zero and no grid work is done.
pub fn band_norm_at_level(
    sigma: &MultiplierSymbol,
    k: i32,
    s: f64,
    p: f64,
    q: f64,
) -> Result<f64> {
    const BAND: (f64, f64) = (0.5, 2.0);
    if let Some((lo, hi)) = sigma.support_hint() {
        let scale = 2f64.powi(k);
        let (dlo, dhi) = (lo / scale, hi / scale);
        if dlo >= BAND.1 || dhi <= BAND.0 {
            return Ok(0.0);
        }
    }
    let (dilated, _) = dilate_symbol(sigma, k)?;
    let (m, n, grid) = (sigma.m(), sigma.n(), *sigma.grid());
    let windowed = match dilated.closed_form().cloned() {
        Some(f) => {
            let g: SymbolFn = Arc::new(move |xi: &[f64]| {
                let rho = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
                let w = psi_hat(rho);
                if w == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    f(xi) * w
                }
            });
            MultiplierSymbol::from_closed_form(m, n, grid, g)?
        }
        None => {
            let mut data = dilated.materialized_field()?.into_data();
            for (idx, v) in data.iter_mut().enumerate() {
                *v *= psi_hat(grid.freq_norm_of(idx));
            }
            MultiplierSymbol::from_samples(m, n, Field::from_data(grid, Space::Frequency, data)?)?
        }
    };
    let (lo, hi) = match dilated.support_hint() {
        Some((lo, hi)) => (lo.max(BAND.0), hi.min(BAND.1)),
        None => BAND,
    };
    symbol_sobolev_norm(&windowed.with_support_hint(lo, hi)?, s, p, q)
}

/// The sweep's upper statistic: the largest band norm over the three levels
/// adjacent to the annulus.  All other levels vanish by support arithmetic.
pub fn sweep_upper_value(params: &SharpnessParams, sigma: &MultiplierSymbol) -> Result<f64> {
    let mut best = 0.0f64;
    for k in [-1, 0, 1] {
        best = best.max(band_norm_at_level(sigma, k, params.s, params.r, params.q)?);
    }
    Ok(best)
}

/// Result of a growth sweep: for each truncation radius, the band-norm upper
/// statistic and the truncated kernel mass.
#[derive(Debug, Clone)]
pub struct SweepCurve {
    pub n_values: Vec<u32>,
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
}

impl SweepCurve {
    pub fn len(&self) -> usize {
        self.n_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n_values.is_empty()
    }

    /// Largest over smallest upper value (NaN for an empty curve, infinite
    /// when some upper value is zero).
    pub fn upper_band_ratio(&self) -> f64 {
        let max = self.upper.iter().cloned().fold(f64::NAN, f64::max);
        let min = self.upper.iter().cloned().fold(f64::NAN, f64::min);
        max / min
    }

    pub fn lower_is_nondecreasing(&self) -> bool {
        self.lower.windows(2).all(|w| w[1] >= w[0])
    }

    pub fn lower_is_strictly_increasing(&self) -> bool {
        self.lower.windows(2).all(|w| w[1] > w[0])
    }

    /// Fitted growth exponent of the lower curve: the slope of
    /// `ln(Δᵢ · (ln N̄ᵢ)^{γ/2})` against `ln N̄ᵢ` over the top half of the
    /// increments, where `Δᵢ` are consecutive differences and `N̄ᵢ` the
    /// geometric midpoints.  Differencing removes the additive core mass and
    /// the log factor removes the slowly varying correction, leaving the pure
    /// power.
    pub fn growth_exponent(&self, gamma: f64) -> Result<f64> {
        if self.len() < 4 {
            return Err(CoreError::Precondition(
                "growth fit needs at least four sweep points".into(),
            ));
        }
        let mut xs = Vec::with_capacity(self.len() - 1);
        let mut ys = Vec::with_capacity(self.len() - 1);
        for i in 0..self.len() - 1 {
            let delta = self.lower[i + 1] - self.lower[i];
            if delta <= 0.0 {
                return Err(CoreError::Precondition(
                    "growth fit needs a strictly increasing lower curve".into(),
                ));
            }
            let nbar = (self.n_values[i] as f64 * self.n_values[i + 1] as f64).sqrt();
            let x = nbar.ln();
            xs.push(x);
            ys.push((delta * x.powf(gamma / 2.0)).ln());
        }
        let start = xs.len() / 2;
        Ok(fit_slope(&xs[start..], &ys[start..]))
    }

    /// Slope of the lower curve against `ln N` over the top half of the
    /// points; positive for logarithmic divergence.
    pub fn log_growth_slope(&self) -> Result<f64> {
        if self.len() < 4 {
            return Err(CoreError::Precondition(
                "slope fit needs at least four sweep points".into(),
            ));
        }
        let xs: Vec<f64> = self.n_values.iter().map(|&n| (n as f64).ln()).collect();
        let start = self.len() / 2;
        Ok(fit_slope(&xs[start..], &self.lower[start..]))
    }

    /// Relative gap between the last two lower values; small when the curve
    /// has saturated.
    pub fn saturation_defect(&self) -> Result<f64> {
        if self.len() < 2 {
            return Err(CoreError::Precondition(
                "saturation defect needs at least two sweep points".into(),
            ));
        }
        let last = self.lower[self.len() - 1];
        if last <= 0.0 {
            return Err(CoreError::Precondition(
                "saturation defect needs a positive lower curve".into(),
            ));
        }
        Ok((last - self.lower[self.len() - 2]) / last)
    }

    /// CSV rendering with a `N,upper,lower` header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,upper,lower\n");
        for i in 0..self.len() {
            out.push_str(&format!(
                "{},{},{}\n",
                self.n_values[i], self.upper[i], self.lower[i]
            ));
        }
        out
    }
}

/// Run the growth sweep: for each truncation radius, build the annular
/// symbol by the quadrature route and record the band-norm upper statistic
/// and the truncated kernel mass.
pub fn growth_sweep(
    params: &SharpnessParams,
    n_values: &[u32],
    grid: Grid,
) -> Result<SweepCurve> {
    params.validate()?;
    ensure_planar(params)?;
    ensure_annulus_resolved(&grid)?;
    if grid.nyquist() < 2.0 {
        return Err(CoreError::Precondition(format!(
            "the level −1 band reaches radius 2; Nyquist {} cannot represent it",
            grid.nyquist()
        )));
    }
    if n_values.is_empty() {
        return Err(CoreError::InvalidParameter(
            "sweep needs at least one truncation radius".into(),
        ));
    }
    if n_values[0] == 0 || n_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CoreError::InvalidParameter(
            "truncation radii must be positive and strictly ascending".into(),
        ));
    }
    let mut upper = Vec::with_capacity(n_values.len());
    let mut lower = Vec::with_capacity(n_values.len());
    for &nv in n_values {
        let sigma = annular_symbol(params, nv as f64, grid)?;
        upper.push(sweep_upper_value(params, &sigma)?);
        lower.push(truncated_kernel_mass(params.t, params.gamma, nv as f64));
    }
    Ok(SweepCurve {
        n_values: n_values.to_vec(),
        upper,
        lower,
    })
}

// ---------------------------------------------------------------------------
// Modulated wave packets.
// ---------------------------------------------------------------------------

/// A one-variable wave packet `a · G(x) · e^{2πicx}`: a band-limited envelope
/// `G` on a very wide host box, modulated to a carrier frequency `c` that is
/// handled analytically, with a scalar amplitude `a`.  Amplitude and
/// envelope carry the entire size of the packet, so scale-invariant norms
/// can be read off the envelope grid; spectra are the envelope modes shifted
/// by the carrier.
#[derive(Debug, Clone)]
pub struct ModulatedPacket {
    envelope: Field,
    spectrum: Field,
    center: f64,
    amplitude: f64,
    eps: f64,
    bandwidth: f64,
}

impl ModulatedPacket {
    pub fn envelope(&self) -> &Field {
        &self.envelope
    }

    pub fn grid(&self) -> &Grid {
        self.envelope.grid()
    }

    /// Carrier frequency, snapped to the envelope frequency lattice.
    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Support radius of the envelope spectrum.
    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// Lebesgue norm of the packet; modulation is modulus-free, so this is
    /// the amplitude times the envelope norm.
    pub fn lp_norm(&self, p: f64) -> f64 {
        self.amplitude * self.envelope.lp_norm(p)
    }

    /// Spectral modes `(frequency, coefficient)` with nonzero coefficient;
    /// frequencies are carrier plus envelope lattice offsets, coefficients
    /// include the amplitude but not the lattice measure.
    pub fn modes(&self) -> Vec<(f64, Complex64)> {
        let grid = self.spectrum.grid();
        let mut out = Vec::new();
        for (idx, v) in self.spectrum.data().iter().enumerate() {
            if v.norm_sqr() > 0.0 {
                out.push((self.center + grid.freq_coord(idx), *v * self.amplitude));
            }
        }
        out
    }

    /// Evaluate the packet at an arbitrary point via the trigonometric
    /// interpolant of the envelope spectrum and the exact carrier character.
    pub fn eval(&self, x: f64) -> Result<Complex64> {
        let env = self.spectrum.eval_trig(&[x])?;
        Ok(env * Complex64::from_polar(1.0, 2.0 * PI * self.center * x) * self.amplitude)
    }
}

/// Build one packet per input exponent, all sharing the same envelope and
/// carrier.  The envelope spectrum is a smooth radial bump of radius
/// `ε · PACKET_BANDWIDTH_BASE / √m` scaled by `1/ε`, and the amplitude of
/// the `j`-th packet is `ε^{1/p_j}`, so every Lebesgue norm is independent
/// of `ε` up to lattice sampling of the bump.  The carrier sits at `1/√m`
/// (snapped to the lattice): an `m`-fold frequency sum of packet modes then
/// lands at joint radius `1` to within a few parts in `10⁵`.
pub fn modulated_packets(eps: f64, p_list: &[f64]) -> Result<Vec<ModulatedPacket>> {
    if p_list.is_empty() {
        return Err(CoreError::InvalidParameter(
            "need at least one input exponent".into(),
        ));
    }
    for &p in p_list {
        if !(p.is_finite() && p > 1.0) {
            return Err(CoreError::InvalidParameter(format!(
                "input exponents must be finite and > 1, got {p}"
            )));
        }
    }
    if !(eps > 0.0 && eps <= PACKET_EPS_MAX) {
        return Err(CoreError::InvalidParameter(format!(
            "packet scale must satisfy 0 < ε ≤ {PACKET_EPS_MAX}, got {eps}"
        )));
    }
    let m = p_list.len() as f64;
    let grid = Grid::new(1, PACKET_POINTS, PACKET_HALF_WIDTH)?;
    let fs = grid.freq_spacing();
    let width = PACKET_BANDWIDTH_BASE / m.sqrt();
    let eps_min = 2.0 * fs / width;
    if eps < eps_min {
        return Err(CoreError::Precondition(format!(
            "ε = {eps} leaves fewer than two frequency cells in the envelope band; \
             need ε ≥ {eps_min:.3e}"
        )));
    }
    let bandwidth = eps * width;
    let center = (1.0 / m.sqrt() / fs).round() * fs;
    let spectrum = Field::from_fn(grid, Space::Frequency, |xi| {
        Complex64::new(eta_window(xi[0].abs() / bandwidth) / eps, 0.0)
    });
    let envelope = fft::inverse(&spectrum)?;
    Ok(p_list
        .iter()
        .map(|&p| ModulatedPacket {
            envelope: envelope.clone(),
            spectrum: spectrum.clone(),
            center,
            amplitude: eps.powf(1.0 / p),
            eps,
            bandwidth,
        })
        .collect())
}

/// Evaluate a multiplier applied to a tuple of packets at one point by a
/// sparse sum over mode combinations: the symbol is evaluated at each
/// frequency tuple, weighted by the product of mode coefficients and the
/// joint character, and scaled by the lattice measure per slot.
pub fn sparse_response(
    symbol_eval: &dyn Fn(&[f64]) -> Complex64,
    packets: &[&ModulatedPacket],
    x: f64,
) -> Result<Complex64> {
    if packets.is_empty() {
        return Err(CoreError::InvalidParameter(
            "sparse response needs at least one packet".into(),
        ));
    }
    let grid = *packets[0].grid();
    for p in packets {
        if p.grid().points_per_axis() != grid.points_per_axis()
            || p.grid().half_width() != grid.half_width()
        {
            return Err(CoreError::Mismatch(
                "packets must share the envelope grid".into(),
            ));
        }
    }
    let modes: Vec<Vec<(f64, Complex64)>> = packets.iter().map(|p| p.modes()).collect();
    if modes.iter().any(|list| list.is_empty()) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let m = packets.len();
    let mut idx = vec![0usize; m];
    let mut freq = vec![0.0f64; m];
    let mut acc = NeumaierSumComplex::new();
    loop {
        let mut coef = Complex64::new(1.0, 0.0);
        let mut freq_sum = 0.0;
        for j in 0..m {
            let (f, c) = modes[j][idx[j]];
            freq[j] = f;
            coef *= c;
            freq_sum += f;
        }
        let phase = Complex64::from_polar(1.0, 2.0 * PI * freq_sum * x);
        acc.add(symbol_eval(&freq) * coef * phase);

        let mut exhausted = true;
        for j in (0..m).rev() {
            idx[j] += 1;
            if idx[j] < modes[j].len() {
                exhausted = false;
                break;
            }
            idx[j] = 0;
        }
        if exhausted {
            break;
        }
    }
    Ok(acc.value() * grid.freq_spacing().powi(m as i32))
}

// ---------------------------------------------------------------------------
// Integrability classifiers.
// ---------------------------------------------------------------------------

/// Verdict of a truncation-convergence experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrability {
    Finite,
    Divergent,
}

/// Octave masses of `K^r` against the radial measure, classified by the
/// corrected top-half slope.  The correction removes the known logarithmic
/// factor before fitting; a slope within the margin falls through to the
/// critical branch, which fits the octave masses against the logarithm and
/// compares the exponent with the summability boundary.
pub fn classify_kernel_integrability(
    t: f64,
    gamma: f64,
    r: f64,
    dim: usize,
) -> Result<Integrability> {
    if !(t > 0.0 && gamma > 0.0 && r > 0.0 && dim >= 1) {
        return Err(CoreError::InvalidParameter(format!(
            "classifier needs positive t, gamma, r and dim ≥ 1, got ({t}, {gamma}, {r}, {dim})"
        )));
    }
    const OCTAVES: usize = 41;
    let mut ln_mass = Vec::with_capacity(OCTAVES);
    let mut ln_log = Vec::with_capacity(OCTAVES);
    for j in 0..OCTAVES {
        let a = 2f64.powi(j as i32);
        let mass = composite_gauss_legendre(a, 2.0 * a, 8, |rho| {
            kernel_value(rho, t, gamma).powf(r) * rho.powi(dim as i32 - 1)
        });
        ln_mass.push(mass.ln());
        let rho_c = a * SQRT_2;
        let u = 1.0 + 4.0 * PI * PI * rho_c * rho_c;
        ln_log.push((1.0 + u.ln()).ln());
    }
    let start = OCTAVES / 2;
    let xs: Vec<f64> = (start..OCTAVES).map(|j| j as f64).collect();
    let corrected: Vec<f64> = (start..OCTAVES)
        .map(|j| ln_mass[j] + 0.5 * gamma * r * ln_log[j])
        .collect();
    let slope = fit_slope(&xs, &corrected);
    if slope > OCTAVE_SLOPE_MARGIN {
        return Ok(Integrability::Divergent);
    }
    if slope < -OCTAVE_SLOPE_MARGIN {
        return Ok(Integrability::Finite);
    }
    let crit = fit_slope(&ln_log[start..], &ln_mass[start..]);
    Ok(if crit >= CRITICAL_SLOPE_BOUNDARY {
        Integrability::Divergent
    } else {
        Integrability::Finite
    })
}

/// Closed-form answer the kernel classifier is checked against: the `r`-th
/// power mass over `dim` dimensions is finite iff `t > dim/r`, or `t = dim/r`
/// with `γ > 2/r`.
pub fn kernel_integrability_criterion(t: f64, gamma: f64, r: f64, dim: usize) -> Integrability {
    let tc = dim as f64 / r;
    if (t - tc).abs() <= 1e-9 * tc.max(1.0) {
        if gamma > 2.0 / r {
            Integrability::Finite
        } else {
            Integrability::Divergent
        }
    } else if t > tc {
        Integrability::Finite
    } else {
        Integrability::Divergent
    }
}

/// Small-radius decay law of the kernel spectrum:
/// `ρ^{-(dim-t)} · (1+2 ln(1/ρ))^{-γ/2}`, meaningful for `ρ < 1`.
pub fn spectrum_decay_law(t: f64, gamma: f64, dim: usize, rho: f64) -> f64 {
    rho.powf(-(dim as f64 - t)) * (1.0 + 2.0 * (1.0 / rho).ln()).powf(-gamma / 2.0)
}

/// Positive-axis cut of the discrete kernel spectrum: the kernel is windowed
/// at the box half-width, transformed, and sampled along one frequency axis.
/// Returns `(radius, value)` pairs for all positive axis wavenumbers.
pub fn spectrum_profile(t: f64, gamma: f64, grid: Grid) -> Result<Vec<(f64, f64)>> {
    if grid.dim() != 2 {
        return Err(CoreError::Precondition(format!(
            "the spectrum profile is an axis cut of a planar transform, got dim {}",
            grid.dim()
        )));
    }
    let spectrum = fft::forward(&windowed_kernel(grid, t, gamma, grid.half_width())?)?;
    let zero = grid
        .position_of_wavenumber(0)
        .expect("every grid represents the zero frequency");
    let half = grid.points_per_axis() as i64 / 2;
    let mut out = Vec::with_capacity((half - 1) as usize);
    for k in 1..half {
        let pos = grid
            .position_of_wavenumber(k)
            .expect("wavenumber below Nyquist");
        let idx = grid.encode_index(&[pos, zero]);
        out.push((k as f64 * grid.freq_spacing(), spectrum.data()[idx].re));
    }
    Ok(out)
}

/// Ratio band of a measured spectrum profile against the decay law over a
/// radius window: returns the smallest and largest ratio.  Fails when the
/// window holds fewer than four samples or the profile is not positive
/// there.
pub fn spectrum_law_band(
    profile: &[(f64, f64)],
    t: f64,
    gamma: f64,
    dim: usize,
    lo: f64,
    hi: f64,
) -> Result<(f64, f64)> {
    let mut min = f64::INFINITY;
    let mut max = 0.0f64;
    let mut count = 0usize;
    for &(rho, value) in profile {
        if !(lo <= rho && rho <= hi) {
            continue;
        }
        if value <= 0.0 {
            return Err(CoreError::Precondition(format!(
                "spectrum profile must be positive in the validation window, got {value} at ρ = {rho}"
            )));
        }
        let ratio = value / spectrum_decay_law(t, gamma, dim, rho);
        min = min.min(ratio);
        max = max.max(ratio);
        count += 1;
    }
    if count < 4 {
        return Err(CoreError::Precondition(format!(
            "validation window [{lo}, {hi}] holds only {count} profile samples"
        )));
    }
    Ok((min, max))
}

/// Dyadic-shell classifier for the Lorentz-space quasinorm of the spectrum,
/// evaluated on the decay law continued toward the origin.  Each shell
/// contributes `μ^{q/r} v^q` with `μ` the shell volume factor and `v` the
/// law at the geometric center; the corrected top-half slope decides, with
/// the critical branch handled as in the kernel classifier.
pub fn classify_spectrum_integrability(
    t: f64,
    gamma: f64,
    r: f64,
    q: f64,
    dim: usize,
) -> Result<Integrability> {
    if !(t > 0.0 && gamma > 0.0 && r > 0.0 && q > 0.0 && q.is_finite() && dim >= 1) {
        return Err(CoreError::InvalidParameter(format!(
            "classifier needs positive finite (t, gamma, r, q) and dim ≥ 1, \
             got ({t}, {gamma}, {r}, {q}, {dim})"
        )));
    }
    const SHELLS: usize = 48;
    let rho_top: f64 = 0.25;
    let mut ln_b = Vec::with_capacity(SHELLS);
    let mut ln_log = Vec::with_capacity(SHELLS);
    for j in 0..SHELLS {
        let hi = rho_top * 2f64.powi(-(j as i32));
        let lo = 0.5 * hi;
        let rc = (hi * lo).sqrt();
        let mu = hi.powi(dim as i32) - lo.powi(dim as i32);
        let v = spectrum_decay_law(t, gamma, dim, rc);
        ln_b.push((q / r) * mu.ln() + q * v.ln());
        ln_log.push((1.0 + 2.0 * (1.0 / rc).ln()).ln());
    }
    let start = SHELLS / 2;
    let xs: Vec<f64> = (start..SHELLS).map(|j| j as f64).collect();
    let corrected: Vec<f64> = (start..SHELLS)
        .map(|j| ln_b[j] + 0.5 * gamma * q * ln_log[j])
        .collect();
    let slope = fit_slope(&xs, &corrected);
    if slope > SHELL_SLOPE_MARGIN {
        return Ok(Integrability::Divergent);
    }
    if slope < -SHELL_SLOPE_MARGIN {
        return Ok(Integrability::Finite);
    }
    let crit = fit_slope(&ln_log[start..], &ln_b[start..]);
    Ok(if crit >= CRITICAL_SLOPE_BOUNDARY {
        Integrability::Divergent
    } else {
        Integrability::Finite
    })
}

/// Closed-form answer the spectrum classifier is checked against: the
/// Lorentz quasinorm with indices `(r, q)` is finite iff `t > dim − dim/r`,
/// or `t = dim − dim/r` with `γ > 2/q`.
pub fn spectrum_integrability_criterion(
    t: f64,
    gamma: f64,
    r: f64,
    q: f64,
    dim: usize,
) -> Integrability {
    let tc = dim as f64 * (1.0 - 1.0 / r);
    if (t - tc).abs() <= 1e-9 * tc.abs().max(1.0) {
        if gamma > 2.0 / q {
            Integrability::Finite
        } else {
            Integrability::Divergent
        }
    } else if t > tc {
        Integrability::Finite
    } else {
        Integrability::Divergent
    }
}

/// Least-squares slope of `ys` against `xs`.
fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    debug_assert!(xs.len() == ys.len() && xs.len() >= 2);
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    sxy / sxx
}
