//! Dyadic bump apparatus: the radial partition profile and its companions,
//! plateau cutoffs, frequency projections, and the grouped symbol
//! decomposition built from them.
//!
//! Everything here is a closed-form radial function, so supports are exact
//! (the profiles return `0.0` outside their stated annuli, not merely small
//! values) and the dyadic partition identity holds to rounding error rather
//! than to a quadrature tolerance.

use std::path::Path;

use num_complex::Complex64;

use crate::fft;
use crate::sum::NeumaierSum;
use crate::symbol::MultiplierSymbol;
use crate::{CoreError, Field, Grid, Result, Space};

/// Smooth bump supported exactly on `(1/2, 2)`, equal to `exp(1 − 1/(1−u²))`
/// in the affine coordinate `u = (r − 5/4)/(3/4)`.
pub fn bump(r: f64) -> f64 {
    let u = (r - 1.25) / 0.75;
    if u.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    }
}

/// Dyadic periodization `S(r) = Σ_j bump(r/2^j)`, positive for `r > 0` and
/// invariant under `r ↦ 2r`.  At most two dyadic scales meet any radius, so
/// the sum is evaluated over a five-scale safety window.
pub fn bump_periodization(r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let j0 = r.log2().floor() as i32;
    let mut s = 0.0;
    for j in (j0 - 2)..=(j0 + 2) {
        s += bump(r / 2f64.powi(j));
    }
    s
}

/// Radial annulus profile `ψ̂(r) = bump(r)/S(r)`: supported exactly on
/// `(1/2, 2)`, equal to `1` at `r = 1`, with `Σ_k ψ̂(r/2^k) = 1` for every
/// `r > 0`.
pub fn psi_hat(r: f64) -> f64 {
    let b = bump(r);
    if b == 0.0 {
        0.0
    } else {
        b / bump_periodization(r)
    }
}

/// Radial low-pass profile: `1` on `[0, 1]`, `0` on `[2, ∞)`, and the
/// partial dyadic sum `Σ_{j≤0} ψ̂(r/2^j)` in between (which collapses to the
/// single term `ψ̂(r)` for `1 < r < 2`).  The value at `r = 0` is `1`.
pub fn phi_hat(r: f64) -> f64 {
    if r <= 1.0 {
        1.0
    } else if r >= 2.0 {
        0.0
    } else {
        psi_hat(r)
    }
}

/// Smooth monotone step: `0` for `u ≤ 0`, `1` for `u ≥ 1`, strictly
/// increasing in between, with value `1/2` at `u = 1/2`.
pub fn smoothed_step(u: f64) -> f64 {
    fn edge(u: f64) -> f64 {
        if u <= 0.0 {
            0.0
        } else {
            (-1.0 / u).exp()
        }
    }
    let a = edge(u);
    if a == 0.0 {
        return 0.0;
    }
    let b = edge(1.0 - u);
    if b == 0.0 {
        return 1.0;
    }
    a / (a + b)
}

/// Radial window: `1` on `[0, 1/2]`, `0` on `[1, ∞)`, smooth and
/// nonincreasing in between.  Dilates `r ↦ eta_window(r/N)` therefore form a
/// monotone family in `N`.
pub fn eta_window(r: f64) -> f64 {
    if r <= 0.5 {
        1.0
    } else if r >= 1.0 {
        0.0
    } else {
        smoothed_step(2.0 * (1.0 - r))
    }
}

/// Smooth radial cutoff equal to `1` on `[plateau_lo, plateau_hi]` and `0`
/// outside `[supp_lo, supp_hi]`, with smoothed-step transition edges.
#[derive(Clone, Copy, Debug)]
pub struct PlateauProfile {
    supp_lo: f64,
    plateau_lo: f64,
    plateau_hi: f64,
    supp_hi: f64,
}

impl PlateauProfile {
    pub fn new(supp_lo: f64, plateau_lo: f64, plateau_hi: f64, supp_hi: f64) -> Result<Self> {
        let ordered = 0.0 <= supp_lo
            && supp_lo < plateau_lo
            && plateau_lo <= plateau_hi
            && plateau_hi < supp_hi
            && supp_hi.is_finite();
        if !ordered {
            return Err(CoreError::InvalidParameter(format!(
                "plateau radii must satisfy 0 ≤ {supp_lo} < {plateau_lo} ≤ {plateau_hi} < {supp_hi}"
            )));
        }
        Ok(Self {
            supp_lo,
            plateau_lo,
            plateau_hi,
            supp_hi,
        })
    }

    pub fn eval(&self, r: f64) -> f64 {
        if r < self.supp_lo || r > self.supp_hi {
            0.0
        } else if r < self.plateau_lo {
            smoothed_step((r - self.supp_lo) / (self.plateau_lo - self.supp_lo))
        } else if r <= self.plateau_hi {
            1.0
        } else {
            smoothed_step((self.supp_hi - r) / (self.supp_hi - self.plateau_hi))
        }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.supp_lo, self.supp_hi)
    }

    pub fn plateau(&self) -> (f64, f64) {
        (self.plateau_lo, self.plateau_hi)
    }
}

/// Wide reproducing cutoff for `m`-fold frequency vectors: `1` on
/// `[√m/4, 4√m]`, supported in `[1/(8√m), 8√m]`.
pub fn theta_profile(m: usize) -> PlateauProfile {
    let root_m = (m as f64).sqrt();
    PlateauProfile::new(1.0 / (8.0 * root_m), root_m / 4.0, 4.0 * root_m, 8.0 * root_m)
        .expect("radii are ordered for every m ≥ 1")
}

/// Narrow unit-sphere cutoff: `1` on `[0.999, 1.001]`, supported in
/// `[0.99, 1.01]`.
pub fn gamma_profile() -> PlateauProfile {
    PlateauProfile::new(0.99, 0.999, 1.001, 1.01).expect("fixed radii are ordered")
}

/// Intermediate annulus cutoff: `1` on `[1/(2√3), 2√3]`, supported in
/// `[1/4, 4]`.
pub fn lambda_profile() -> PlateauProfile {
    let root3 = 3.0f64.sqrt();
    PlateauProfile::new(0.25, 1.0 / (2.0 * root3), 2.0 * root3, 4.0).expect("fixed radii are ordered")
}

/// The assembled bump family for an `m`-linear problem on an `n`-dimensional
/// base grid, with a finite dyadic level window standing in for `k ∈ ℤ`.
#[derive(Clone, Debug)]
pub struct LPFamily {
    m: usize,
    n: usize,
    grid: Grid,
    window: (i32, i32),
    theta: PlateauProfile,
    gamma: PlateauProfile,
    lambda: PlateauProfile,
}

/// Tolerance certified for the dyadic partition identities at build time.
pub const PARTITION_TOL: f64 = 1e-9;

impl LPFamily {
    /// Build and certify the family.
    ///
    /// The window `(k_min, k_max)` must fit the grid: `2^{k_max}` may not
    /// exceed the Nyquist frequency and `2^{k_min}` may not fall below half
    /// the frequency spacing.  The dyadic partition identity is then
    /// certified on the certificate band `[2^{k_min+1}, 2^{k_max−1}]`, both
    /// for base-grid radii and for `mn`-dimensional radii.
    pub fn build(m: usize, n: usize, window: (i32, i32), grid: Grid) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(CoreError::InvalidParameter(
                "arity and variable count must be positive".into(),
            ));
        }
        if grid.dim() != n {
            return Err(CoreError::Mismatch(format!(
                "family base grid must be {n}-dimensional, got {}",
                grid.dim()
            )));
        }
        let (k_min, k_max) = window;
        if k_min > k_max {
            return Err(CoreError::InvalidParameter(format!(
                "level window is empty: ({k_min}, {k_max})"
            )));
        }
        if 2f64.powi(k_max) > grid.nyquist() * (1.0 + 1e-12) {
            return Err(CoreError::InvalidParameter(format!(
                "window top 2^{k_max} exceeds the Nyquist frequency {}",
                grid.nyquist()
            )));
        }
        if 2f64.powi(k_min) < 0.5 * grid.freq_spacing() * (1.0 - 1e-12) {
            return Err(CoreError::InvalidParameter(format!(
                "window bottom 2^{k_min} falls below half the frequency spacing {}",
                grid.freq_spacing()
            )));
        }
        let fam = Self {
            m,
            n,
            grid,
            window,
            theta: theta_profile(m),
            gamma: gamma_profile(),
            lambda: lambda_profile(),
        };
        fam.certify()?;
        Ok(fam)
    }

    fn certify(&self) -> Result<()> {
        let (band_lo, band_hi) = self.certificate_band();
        // Base-grid radii: exact grid scan when affordable.
        if self.grid.total_points() <= 1 << 20 {
            for idx in 0..self.grid.total_points() {
                let r = self.grid.freq_norm_of(idx);
                self.certify_radius(r, band_lo, band_hi)?;
            }
        }
        // Dense log-radial sweep covering both the base and the mn-dim
        // radius range.
        let max_r = self.grid.nyquist() * ((self.m * self.n) as f64).sqrt();
        let steps = 4096;
        let lo = (0.25 * self.grid.freq_spacing()).ln();
        let hi = max_r.ln();
        for i in 0..=steps {
            let r = (lo + (hi - lo) * i as f64 / steps as f64).exp();
            self.certify_radius(r, band_lo, band_hi)?;
        }
        Ok(())
    }

    fn certify_radius(&self, r: f64, band_lo: f64, band_hi: f64) -> Result<()> {
        // Partition identity on the certificate band.
        if r >= band_lo && r <= band_hi {
            let mut total = 0.0;
            for k in self.window.0..=self.window.1 {
                total += psi_hat(r / 2f64.powi(k));
            }
            if (total - 1.0).abs() > PARTITION_TOL {
                return Err(CoreError::Precondition(format!(
                    "dyadic partition fails at radius {r}: sum {total}"
                )));
            }
        }
        // Low-pass complement identity holds at every radius.
        if r > 0.0 {
            let mut total = phi_hat(r);
            let j_hi = (r.log2().ceil() as i32 + 2).max(1);
            for j in 1..=j_hi {
                total += psi_hat(r / 2f64.powi(j));
            }
            if (total - 1.0).abs() > PARTITION_TOL {
                return Err(CoreError::Precondition(format!(
                    "low-pass complement fails at radius {r}: sum {total}"
                )));
            }
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base_grid(&self) -> &Grid {
        &self.grid
    }

    /// The `mn`-dimensional grid sharing the base grid's axes.
    pub fn mn_grid(&self) -> Result<Grid> {
        self.grid.with_dim(self.m * self.n)
    }

    /// Inclusive dyadic level window `(k_min, k_max)`.
    pub fn window(&self) -> (i32, i32) {
        self.window
    }

    /// Radii whose full dyadic partition lies inside the window.
    pub fn certificate_band(&self) -> (f64, f64) {
        (2f64.powi(self.window.0 + 1), 2f64.powi(self.window.1 - 1))
    }

    /// Largest-block radii the grouped decomposition can reproduce exactly.
    pub fn coverage_band(&self) -> (f64, f64) {
        (2f64.powi(self.window.0), 2f64.powi(self.window.1))
    }

    /// Level offset separating the low and high groups: `5 + ⌊log₂ m⌋`.
    pub fn low_shift(&self) -> i32 {
        5 + self.m.ilog2() as i32
    }

    pub fn psi_hat(&self, r: f64) -> f64 {
        psi_hat(r)
    }

    pub fn phi_hat(&self, r: f64) -> f64 {
        phi_hat(r)
    }

    /// Annulus profile at dyadic level `k`: `ψ̂(r/2^k)`.
    pub fn psi_level(&self, r: f64, k: i32) -> f64 {
        psi_hat(r / 2f64.powi(k))
    }

    /// Low-pass profile at dyadic level `k`: `φ̂(r/2^k)`.
    pub fn phi_level(&self, r: f64, k: i32) -> f64 {
        phi_hat(r / 2f64.powi(k))
    }

    pub fn theta_hat(&self, r: f64) -> f64 {
        self.theta.eval(r)
    }

    pub fn gamma_hat(&self, r: f64) -> f64 {
        self.gamma.eval(r)
    }

    pub fn lambda_hat(&self, r: f64) -> f64 {
        self.lambda.eval(r)
    }

    pub fn theta_profile(&self) -> &PlateauProfile {
        &self.theta
    }

    pub fn gamma_profile(&self) -> &PlateauProfile {
        &self.gamma
    }

    pub fn lambda_profile(&self) -> &PlateauProfile {
        &self.lambda
    }

    /// Dump grid-sampled profiles plus a JSON sidecar of the annulus
    /// constants into `dir`.
    pub fn export(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        let sample = |f: &dyn Fn(f64) -> f64| -> Field {
            let mut data = Vec::with_capacity(self.grid.total_points());
            for idx in 0..self.grid.total_points() {
                data.push(Complex64::new(f(self.grid.freq_norm_of(idx)), 0.0));
            }
            Field::from_data(self.grid, Space::Frequency, data)
                .expect("sampled profile matches its grid")
        };
        crate::io::write_field(dir.join("psi_hat.hlab"), &sample(&psi_hat))?;
        crate::io::write_field(dir.join("phi_hat.hlab"), &sample(&phi_hat))?;
        crate::io::write_field(dir.join("theta_hat.hlab"), &sample(&|r| self.theta.eval(r)))?;
        crate::io::write_field(dir.join("gamma_hat.hlab"), &sample(&|r| self.gamma.eval(r)))?;
        crate::io::write_field(dir.join("lambda_hat.hlab"), &sample(&|r| self.lambda.eval(r)))?;
        let sidecar = serde_json::json!({
            "m": self.m,
            "n": self.n,
            "window": { "k_min": self.window.0, "k_max": self.window.1 },
            "theta": { "support": self.theta.support(), "plateau": self.theta.plateau() },
            "gamma": { "support": self.gamma.support(), "plateau": self.gamma.plateau() },
            "lambda": { "support": self.lambda.support(), "plateau": self.lambda.plateau() },
        });
        let text = serde_json::to_string_pretty(&sidecar)
            .map_err(|e| CoreError::Format(e.to_string()))?;
        std::fs::write(dir.join("family.json"), text)?;
        Ok(())
    }
}

/// Frequency projection applied by `project`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    /// Annulus piece at level `k`: multiplier `ψ̂(ξ/2^k)`.
    Band { level: i32 },
    /// Low-pass below level `k`: multiplier `φ̂(ξ/2^k)`.
    Low { level: i32 },
    /// Low-pass shifted down by the family's group offset: multiplier
    /// `φ̂(ξ/2^{k − (5 + ⌊log₂ m⌋)})`.
    LowShifted { level: i32 },
}

/// Apply a dyadic frequency projection to a field on the family's base grid.
/// The input's side (physical or frequency) is preserved.
pub fn project(g: &Field, fam: &LPFamily, kind: Projection) -> Result<Field> {
    if g.grid() != fam.base_grid() {
        return Err(CoreError::Mismatch(
            "projection input must live on the family's base grid".into(),
        ));
    }
    let level = match kind {
        Projection::Band { level } | Projection::Low { level } | Projection::LowShifted { level } => {
            level
        }
    };
    let (k_min, k_max) = fam.window();
    if level < k_min || level > k_max {
        return Err(CoreError::InvalidParameter(format!(
            "projection level {level} outside window ({k_min}, {k_max})"
        )));
    }
    let physical_input = g.space() == Space::Physical;
    let spectrum = if physical_input {
        fft::forward(g)?
    } else {
        g.clone()
    };
    let factor: Box<dyn Fn(f64) -> f64> = match kind {
        Projection::Band { level } => Box::new(move |r| psi_hat(r / 2f64.powi(level))),
        Projection::Low { level } => Box::new(move |r| phi_hat(r / 2f64.powi(level))),
        Projection::LowShifted { level } => {
            let eff = level - fam.low_shift();
            Box::new(move |r| phi_hat(r / 2f64.powi(eff)))
        }
    };
    let grid = *spectrum.grid();
    let mut data = spectrum.data().to_vec();
    for (idx, value) in data.iter_mut().enumerate() {
        *value *= factor(grid.freq_norm_of(idx));
    }
    let filtered = Field::from_data(grid, Space::Frequency, data)?;
    if physical_input {
        fft::inverse(&filtered)
    } else {
        Ok(filtered)
    }
}

/// Grouped decomposition of a symbol into `m` parts plus the low/high split
/// of the first part.
#[derive(Clone, Debug)]
pub struct SymbolDecomposition {
    parts: Vec<MultiplierSymbol>,
    low: MultiplierSymbol,
    high: MultiplierSymbol,
    k_window: (i32, i32),
}

impl SymbolDecomposition {
    /// Parts `1..=m`; part `l` groups the terms whose `l`-th block carries
    /// the largest dyadic level (ties owned by the lowest index).
    pub fn parts(&self) -> &[MultiplierSymbol] {
        &self.parts
    }

    pub fn part(&self, l: usize) -> &MultiplierSymbol {
        &self.parts[l]
    }

    /// Piece of part 1 where some later block sits within the group offset
    /// of the leading level.
    pub fn low(&self) -> &MultiplierSymbol {
        &self.low
    }

    /// Piece of part 1 where all later blocks sit far below the leading
    /// level.
    pub fn high(&self) -> &MultiplierSymbol {
        &self.high
    }

    pub fn k_window(&self) -> (i32, i32) {
        self.k_window
    }

    /// Pointwise sum of all parts, for reconstruction checks.
    pub fn reconstruction(&self) -> Result<Field> {
        let mut acc = self.parts[0].materialized_field()?;
        for part in &self.parts[1..] {
            acc = acc.add(&part.materialized_field()?)?;
        }
        Ok(acc)
    }
}

fn block_radii(xi: &[f64], n: usize, rho: &mut [f64]) {
    for (j, r) in rho.iter_mut().enumerate() {
        *r = xi[j * n..(j + 1) * n].iter().map(|x| x * x).sum::<f64>().sqrt();
    }
}

/// Decompose `σ` into grouped parts over the family's level window.
///
/// Wherever `|σ|` is essentially nonzero the largest block radius must lie in
/// the family's coverage band; this is exactly the condition under which the
/// finite-window grouped sums telescope back to `σ` on the whole grid, and
/// it is enforced up front.
pub fn decompose(sigma: &MultiplierSymbol, fam: &LPFamily) -> Result<SymbolDecomposition> {
    let mn_grid = fam.mn_grid()?;
    if sigma.grid() != &mn_grid {
        return Err(CoreError::Mismatch(
            "symbol grid does not match the family's mn-dimensional grid".into(),
        ));
    }
    if sigma.m() != fam.m() || sigma.n() != fam.n() {
        return Err(CoreError::Mismatch(
            "symbol arity does not match the family".into(),
        ));
    }
    let values = sigma.materialized_field()?;
    let tol = 1e-12 * values.sup_norm().max(1.0);
    let (k_min, k_max) = fam.window();
    let (cov_lo, cov_hi) = fam.coverage_band();
    let shift = fam.low_shift();
    let (m, n) = (fam.m(), fam.n());
    let total = mn_grid.total_points();

    let zero = Complex64::new(0.0, 0.0);
    let mut parts_data: Vec<Vec<Complex64>> = vec![vec![zero; total]; m];
    let mut high_data = vec![zero; total];
    let mut xi = vec![0.0; mn_grid.dim()];
    let mut rho = vec![0.0; m];
    for idx in 0..total {
        let v = values.data()[idx];
        if v == zero {
            continue;
        }
        mn_grid.freq_coords_of(idx, &mut xi);
        block_radii(&xi, n, &mut rho);
        if v.norm() > tol {
            let max_rho = rho.iter().fold(0.0f64, |a, &b| a.max(b));
            if max_rho < cov_lo * (1.0 - 1e-9) || max_rho > cov_hi * (1.0 + 1e-9) {
                return Err(CoreError::Precondition(format!(
                    "symbol support escapes the coverage band: largest block radius {max_rho} at |σ| = {}",
                    v.norm()
                )));
            }
        }
        for (l, part) in parts_data.iter_mut().enumerate() {
            let mut acc = NeumaierSum::new();
            'levels: for k in k_min..=k_max {
                let mut term = psi_hat(rho[l] / 2f64.powi(k));
                if term == 0.0 {
                    continue;
                }
                for &r in &rho[..l] {
                    term *= phi_hat(r / 2f64.powi(k - 1));
                    if term == 0.0 {
                        continue 'levels;
                    }
                }
                for &r in &rho[l + 1..] {
                    term *= phi_hat(r / 2f64.powi(k));
                    if term == 0.0 {
                        continue 'levels;
                    }
                }
                acc.add(term);
            }
            part[idx] = v * acc.value();
        }
        let mut acc = NeumaierSum::new();
        'high_levels: for k in k_min..=k_max {
            let mut term = psi_hat(rho[0] / 2f64.powi(k));
            if term == 0.0 {
                continue;
            }
            for &r in &rho[1..] {
                term *= phi_hat(r / 2f64.powi(k - shift));
                if term == 0.0 {
                    continue 'high_levels;
                }
            }
            acc.add(term);
        }
        high_data[idx] = v * acc.value();
    }

    let low_data: Vec<Complex64> = parts_data[0]
        .iter()
        .zip(&high_data)
        .map(|(a, b)| a - b)
        .collect();
    let to_symbol = |data: Vec<Complex64>| -> Result<MultiplierSymbol> {
        MultiplierSymbol::from_samples(m, n, Field::from_data(mn_grid, Space::Frequency, data)?)
    };
    let parts = parts_data
        .into_iter()
        .map(to_symbol)
        .collect::<Result<Vec<_>>>()?;
    Ok(SymbolDecomposition {
        low: to_symbol(low_data)?,
        high: to_symbol(high_data)?,
        parts,
        k_window: (k_min, k_max),
    })
}

/// Reference decomposition by literal summation over level tuples
/// `(k_1, …, k_m)` in the window, regrouped by which block carries the
/// largest level.
///
/// Unlike `decompose`, the tuple sum truncates every block's levels at the
/// window bottom, so the two routes agree only where each block radius lies
/// inside the window (no block degenerates toward zero frequency).  Cost is
/// `O(total · W^m)`; intended for cross-validation on small grids.
pub fn decompose_reference(
    sigma: &MultiplierSymbol,
    fam: &LPFamily,
) -> Result<SymbolDecomposition> {
    let mn_grid = fam.mn_grid()?;
    if sigma.grid() != &mn_grid || sigma.m() != fam.m() || sigma.n() != fam.n() {
        return Err(CoreError::Mismatch(
            "symbol does not match the family".into(),
        ));
    }
    let values = sigma.materialized_field()?;
    let (k_min, k_max) = fam.window();
    let w = (k_max - k_min + 1) as usize;
    let shift = fam.low_shift();
    let (m, n) = (fam.m(), fam.n());
    let total = mn_grid.total_points();

    let zero = Complex64::new(0.0, 0.0);
    let mut parts_data: Vec<Vec<Complex64>> = vec![vec![zero; total]; m];
    let mut high_data = vec![zero; total];
    let mut xi = vec![0.0; mn_grid.dim()];
    let mut rho = vec![0.0; m];
    let mut levels = vec![0usize; m];
    for idx in 0..total {
        let v = values.data()[idx];
        if v == zero {
            continue;
        }
        mn_grid.freq_coords_of(idx, &mut xi);
        block_radii(&xi, n, &mut rho);
        let mut parts_acc: Vec<NeumaierSum> = (0..m).map(|_| NeumaierSum::new()).collect();
        let mut high_acc = NeumaierSum::new();
        levels.iter_mut().for_each(|l| *l = 0);
        loop {
            let ks: Vec<i32> = levels.iter().map(|&l| k_min + l as i32).collect();
            let mut term = 1.0;
            for j in 0..m {
                term *= psi_hat(rho[j] / 2f64.powi(ks[j]));
                if term == 0.0 {
                    break;
                }
            }
            if term != 0.0 {
                // Owner: lowest index among blocks attaining the maximal
                // level.
                let k_top = *ks.iter().max().expect("m ≥ 1");
                let owner = ks.iter().position(|&k| k == k_top).expect("max attained");
                parts_acc[owner].add(term);
                if owner == 0 && ks[1..].iter().all(|&k| k <= ks[0] - shift) {
                    high_acc.add(term);
                }
            }
            // Odometer over the level tuple.
            let mut axis = m;
            let exhausted = loop {
                if axis == 0 {
                    break true;
                }
                axis -= 1;
                levels[axis] += 1;
                if levels[axis] < w {
                    break false;
                }
                levels[axis] = 0;
            };
            if exhausted {
                break;
            }
        }
        for (l, acc) in parts_acc.iter().enumerate() {
            parts_data[l][idx] = v * acc.value();
        }
        high_data[idx] = v * high_acc.value();
    }

    let low_data: Vec<Complex64> = parts_data[0]
        .iter()
        .zip(&high_data)
        .map(|(a, b)| a - b)
        .collect();
    let to_symbol = |data: Vec<Complex64>| -> Result<MultiplierSymbol> {
        MultiplierSymbol::from_samples(m, n, Field::from_data(mn_grid, Space::Frequency, data)?)
    };
    let parts = parts_data
        .into_iter()
        .map(to_symbol)
        .collect::<Result<Vec<_>>>()?;
    Ok(SymbolDecomposition {
        low: to_symbol(low_data)?,
        high: to_symbol(high_data)?,
        parts,
        k_window: (k_min, k_max),
    })
}
