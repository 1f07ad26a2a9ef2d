//! The `m`-linear multiplier operator, its direct-summation oracle,
//! transposed symbols, the coordinate involution on product space, and the
//! pointwise domination report.
//!
//! The spectral route forms the full `mn`-dimensional tensor of input
//! spectra, multiplies by the symbol, inverse-transforms, and restricts to
//! the diagonal — on band-limited inputs this reproduces the defining
//! integral exactly, which is why the alias guard (inputs confined to
//! `1/(2m)` of Nyquist per axis) is enforced rather than advisory.

use num_complex::Complex64;

use crate::fft;
use crate::maximal::{maximal_function, MaximalConfig};
use crate::sum::NeumaierSumComplex;
use crate::symbol::{dilate_symbol, symbol_sobolev_norm, MultiplierSymbol};
use crate::{CoreError, Field, Grid, Result, Space};

/// Relative threshold below which a spectral coefficient counts as zero for
/// the alias guard.
pub const ALIAS_GUARD_REL_THRESHOLD: f64 = 1e-10;

/// Per-output-point term budget for the direct-summation oracle.
pub const DIRECT_BUDGET: u64 = 1 << 22;

/// How an application was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApplyMethod {
    Spectral,
    Direct,
}

/// Result of applying the operator: the output field plus bookkeeping.
#[derive(Clone, Debug)]
pub struct OperatorApplication {
    /// Output on the inputs' `n`-dimensional grid, physical side.
    pub output: Field,
    pub method: ApplyMethod,
    /// Sup-norm disagreement between the spectral and direct routes,
    /// relative to the output's sup norm; zero when only one route ran.
    pub residual: f64,
}

fn check_inputs(sigma: &MultiplierSymbol, inputs: &[&Field]) -> Result<Grid> {
    if inputs.len() != sigma.m() {
        return Err(CoreError::Mismatch(format!(
            "symbol expects {} inputs, got {}",
            sigma.m(),
            inputs.len()
        )));
    }
    let base = *inputs[0].grid();
    if base.dim() != sigma.n() {
        return Err(CoreError::Mismatch(format!(
            "inputs must be {}-dimensional, got {}",
            sigma.n(),
            base.dim()
        )));
    }
    for f in inputs {
        if f.grid() != &base {
            return Err(CoreError::Mismatch("inputs live on different grids".into()));
        }
        if f.space() != Space::Physical {
            return Err(CoreError::Mismatch(
                "operator inputs are physical-side fields".into(),
            ));
        }
    }
    let sym_grid = sigma.grid();
    if sym_grid.points_per_axis() != base.points_per_axis()
        || sym_grid.half_width() != base.half_width()
    {
        return Err(CoreError::Mismatch(
            "symbol grid axes do not match the input grid".into(),
        ));
    }
    Ok(base)
}

/// Forward-transform the inputs, enforcing the alias guard: every
/// essentially nonzero coefficient must satisfy `|ξ_axis| ≤ nyquist/(2m)`.
fn guarded_spectra(inputs: &[&Field], m: usize) -> Result<Vec<Field>> {
    let mut spectra = Vec::with_capacity(inputs.len());
    for (slot, f) in inputs.iter().enumerate() {
        let spec = fft::forward(f)?;
        let grid = *spec.grid();
        let cutoff = grid.nyquist() / (2.0 * m as f64) + 1e-12;
        let threshold = ALIAS_GUARD_REL_THRESHOLD * spec.sup_norm();
        let mut xi = vec![0.0; grid.dim()];
        for idx in 0..grid.total_points() {
            if spec.data()[idx].norm() <= threshold {
                continue;
            }
            grid.freq_coords_of(idx, &mut xi);
            if xi.iter().any(|x| x.abs() > cutoff) {
                return Err(CoreError::Precondition(format!(
                    "alias guard: input {slot} has coefficient {:.3e} at {:?}, beyond |ξ| ≤ {cutoff:.6}",
                    spec.data()[idx].norm(),
                    xi
                )));
            }
        }
        spectra.push(spec);
    }
    Ok(spectra)
}

/// Apply the operator by the spectral route.
pub fn apply(sigma: &MultiplierSymbol, inputs: &[&Field]) -> Result<OperatorApplication> {
    check_inputs(sigma, inputs)?;
    let spectra = guarded_spectra(inputs, sigma.m())?;
    let refs: Vec<&Field> = spectra.iter().collect();
    let tensor = Field::tensor(&refs)?;
    let sym_values = sigma.materialized_field()?;
    let mut data = tensor.data().to_vec();
    for (idx, v) in data.iter_mut().enumerate() {
        *v *= sym_values.data()[idx];
    }
    let product = Field::from_data(*tensor.grid(), Space::Frequency, data)?;
    let big_physical = fft::inverse(&product)?;
    let output = big_physical.diagonal_restrict(sigma.m())?;
    Ok(OperatorApplication {
        output,
        method: ApplyMethod::Spectral,
        residual: 0.0,
    })
}

/// Apply the operator by literal nested summation of the defining formula.
/// Serves as the oracle for `apply`; refuses grids where the per-point term
/// count exceeds the budget.
pub fn apply_direct(sigma: &MultiplierSymbol, inputs: &[&Field]) -> Result<OperatorApplication> {
    let base = check_inputs(sigma, inputs)?;
    let m = sigma.m();
    let n = sigma.n();
    let slot_points = base.total_points() as u64;
    let terms = slot_points.checked_pow(m as u32).ok_or_else(|| {
        CoreError::Budget("direct summation term count overflows".into())
    })?;
    if terms > DIRECT_BUDGET {
        return Err(CoreError::Budget(format!(
            "direct summation needs {terms} terms per output point, budget is {DIRECT_BUDGET}"
        )));
    }
    let spectra = guarded_spectra(inputs, m)?;
    let sym_values = sigma.materialized_field()?;
    let fs_pow = base.freq_cell_volume().powi(m as i32);
    let mn_grid = *sigma.grid();

    // Precompute per-slot frequency coordinates.
    let mut slot_freqs: Vec<Vec<f64>> = Vec::with_capacity(slot_points as usize);
    for idx in 0..base.total_points() {
        let mut xi = vec![0.0; n];
        base.freq_coords_of(idx, &mut xi);
        slot_freqs.push(xi);
    }

    let mut out = Vec::with_capacity(base.total_points());
    let mut x = vec![0.0; n];
    let mut slots = vec![0usize; m];
    for out_idx in 0..base.total_points() {
        base.coords_of(out_idx, &mut x);
        let mut acc = NeumaierSumComplex::new();
        slots.iter_mut().for_each(|s| *s = 0);
        loop {
            // Flat mn-index is the base-M^n odometer read as one number.
            let mut sym_idx = 0usize;
            for &s in slots.iter() {
                sym_idx = sym_idx * base.total_points() + s;
            }
            let mut coeff = sym_values.data()[sym_idx];
            if coeff != Complex64::new(0.0, 0.0) {
                for (j, &s) in slots.iter().enumerate() {
                    coeff *= spectra[j].data()[s];
                    if coeff == Complex64::new(0.0, 0.0) {
                        break;
                    }
                }
            }
            if coeff != Complex64::new(0.0, 0.0) {
                let mut phase = 0.0;
                for (a, &xa) in x.iter().enumerate() {
                    let mut sum_freq = 0.0;
                    for &s in slots.iter() {
                        sum_freq += slot_freqs[s][a];
                    }
                    phase += xa * sum_freq;
                }
                let rot = Complex64::new(0.0, std::f64::consts::TAU * phase).exp();
                acc.add(coeff * rot);
            }
            let mut axis = m;
            let exhausted = loop {
                if axis == 0 {
                    break true;
                }
                axis -= 1;
                slots[axis] += 1;
                if slots[axis] < base.total_points() {
                    break false;
                }
                slots[axis] = 0;
            };
            if exhausted {
                break;
            }
        }
        out.push(acc.value() * fs_pow);
    }
    debug_assert_eq!(mn_grid.dim(), m * n);
    Ok(OperatorApplication {
        output: Field::from_data(base, Space::Physical, out)?,
        method: ApplyMethod::Direct,
        residual: 0.0,
    })
}

/// Spectral application cross-checked against the direct oracle; the
/// reported residual is the sup-norm disagreement relative to the output
/// scale.
pub fn apply_cross_checked(
    sigma: &MultiplierSymbol,
    inputs: &[&Field],
) -> Result<OperatorApplication> {
    let spectral = apply(sigma, inputs)?;
    let direct = apply_direct(sigma, inputs)?;
    let scale = direct.output.sup_norm().max(spectral.output.sup_norm());
    let mut worst = 0.0f64;
    for (a, b) in spectral.output.data().iter().zip(direct.output.data()) {
        worst = worst.max((a - b).norm());
    }
    let residual = if scale > 0.0 { worst / scale } else { worst };
    Ok(OperatorApplication {
        residual,
        ..spectral
    })
}

/// Transposed symbol in slot `j` (0-based): the `j`-th frequency block is
/// replaced by minus the sum of all blocks.
///
/// Closed forms transpose exactly.  Sampled symbols use the exact index map
/// on the grid; lookups whose true (unwrapped) frequency leaves the grid are
/// zero-filled, which requires a support hint confined to the alias-safe
/// band.
pub fn transpose_symbol(sigma: &MultiplierSymbol, j: usize) -> Result<MultiplierSymbol> {
    let m = sigma.m();
    let n = sigma.n();
    if j >= m {
        return Err(CoreError::InvalidParameter(format!(
            "transpose slot {j} out of range for arity {m}"
        )));
    }
    let grid = *sigma.grid();
    let root = ((m + 1) as f64).sqrt();
    let hint = sigma.support_hint().map(|(lo, hi)| (lo / root, hi * root));
    if let Some(f) = sigma.closed_form().cloned() {
        let dim = grid.dim();
        let transposed: crate::symbol::SymbolFn = std::sync::Arc::new(move |xi: &[f64]| {
            let mut inner = xi.to_vec();
            for a in 0..n {
                let mut sum = 0.0;
                for slot in 0..m {
                    sum += xi[slot * n + a];
                }
                inner[j * n + a] = -sum;
            }
            debug_assert_eq!(inner.len(), dim);
            f(&inner)
        });
        let mut out = MultiplierSymbol::from_closed_form(m, n, grid, transposed)?;
        if let Some((lo, hi)) = hint {
            out = out.with_support_hint(lo, hi)?;
        }
        return Ok(out);
    }

    let values = sigma.sampled_values().expect("symbol has a representation");
    let m_axis = grid.points_per_axis() as i64;
    let half = m_axis / 2;
    let nyq = grid.nyquist();
    let (_, supp_hi) = sigma.support_hint().unwrap_or((0.0, f64::INFINITY));
    let total = grid.total_points();
    let mut multi = vec![0usize; grid.dim()];
    let mut data = vec![Complex64::new(0.0, 0.0); total];
    for (idx, value) in data.iter_mut().enumerate() {
        grid.decode_index(idx, &mut multi);
        let mut src = 0usize;
        let mut aliased = false;
        for (pos, &i) in multi.iter().enumerate() {
            let (slot, a) = (pos / n, pos % n);
            let w = if slot == j {
                let mut sum = 0i64;
                for sl in 0..m {
                    sum += multi[sl * n + a] as i64 - half;
                }
                let unwrapped = -sum;
                if !(-half..half).contains(&unwrapped) {
                    aliased = true;
                }
                ((unwrapped % m_axis) + m_axis + half) % m_axis - half
            } else {
                i as i64 - half
            };
            src = src * m_axis as usize + (w + half) as usize;
        }
        if aliased {
            // True frequency left the grid; the value there is zero only if
            // the support is certified inside the alias-safe band.
            if supp_hi <= nyq * (1.0 + 1e-12) {
                *value = Complex64::new(0.0, 0.0);
            } else {
                return Err(CoreError::Precondition(
                    "transpose would wrap frequencies and the symbol's support is not \
                     certified inside the alias-safe band"
                        .into(),
                ));
            }
        } else {
            *value = values.data()[src];
        }
    }
    let field = Field::from_data(grid, Space::Frequency, data)?;
    let mut out = MultiplierSymbol::from_samples(m, n, field)?;
    if let Some((lo, hi)) = hint {
        out = out.with_support_hint(lo, hi)?;
    }
    Ok(out)
}

/// Coordinate involution on the product grid: block `j` of the argument is
/// replaced by minus the sum of all blocks, with periodic wrap.  Exact index
/// permutation, hence measure-preserving.
pub fn coordinate_map(f: &Field, m: usize, j: usize) -> Result<Field> {
    let grid = *f.grid();
    if f.space() != Space::Physical {
        return Err(CoreError::Mismatch(
            "coordinate map acts on physical-side fields".into(),
        ));
    }
    if m == 0 || grid.dim() % m != 0 {
        return Err(CoreError::Mismatch(format!(
            "dimension {} is not a multiple of arity {m}",
            grid.dim()
        )));
    }
    if j >= m {
        return Err(CoreError::InvalidParameter(format!(
            "slot {j} out of range for arity {m}"
        )));
    }
    let n = grid.dim() / m;
    let m_axis = grid.points_per_axis() as i64;
    let half = m_axis / 2;
    let total = grid.total_points();
    let mut multi = vec![0usize; grid.dim()];
    let mut data = vec![Complex64::new(0.0, 0.0); total];
    for (idx, value) in data.iter_mut().enumerate() {
        grid.decode_index(idx, &mut multi);
        let mut src = 0usize;
        for (pos, &i) in multi.iter().enumerate() {
            let (slot, a) = (pos / n, pos % n);
            let i_src = if slot == j {
                // Coordinate −Σ_l x_{l,a} has index (m+1)·M/2 − Σ_l i_{l,a},
                // wrapped periodically.
                let mut sum = 0i64;
                for sl in 0..m {
                    sum += multi[sl * n + a] as i64;
                }
                let raw = (m as i64 + 1) * half - sum;
                ((raw % m_axis) + m_axis) % m_axis
            } else {
                i as i64
            };
            src = src * m_axis as usize + i_src as usize;
        }
        *value = f.data()[src];
    }
    Field::from_data(grid, Space::Physical, data)
}

/// Report from the pointwise domination check.
#[derive(Clone, Debug)]
pub struct DominationReport {
    /// `(lhs, rhs)` per sample point.
    pub samples: Vec<(f64, f64)>,
    /// Largest `lhs/rhs` over points with positive `rhs`.
    pub max_ratio: f64,
    /// The smoothness-norm factor entering every `rhs`.
    pub symbol_norm: f64,
}

/// Compare `|σ^∨ ∗ (f_1 ⊗ ⋯ ⊗ f_m)|` at chosen product-space points against
/// the product of the dilated symbol's smoothness norm and the power
/// maximal functions of the inputs.
///
/// `level` is the dyadic level `k` at which the compactly supported piece
/// `σ_k` was cut, so the norm factor reads the symbol at arguments `2^k ξ`.
/// Sample points are `mn`-dimensional multi-indices on the product grid.
pub fn pointwise_domination_check(
    sigma_k: &MultiplierSymbol,
    inputs: &[&Field],
    level: i32,
    q: f64,
    s: f64,
    sample_points: &[Vec<usize>],
) -> Result<DominationReport> {
    let base = check_inputs(sigma_k, inputs)?;
    let m = sigma_k.m();
    let n = sigma_k.n();
    let mn = (m * n) as f64;
    if !(s > mn / 2.0 && s < mn) {
        return Err(CoreError::InvalidParameter(format!(
            "smoothness must satisfy mn/2 < s < mn, got s = {s} for mn = {mn}"
        )));
    }
    if !(q > mn / s) {
        return Err(CoreError::InvalidParameter(format!(
            "power must satisfy q > mn/s = {}, got {q}",
            mn / s
        )));
    }
    if sigma_k.support_hint().is_none() {
        return Err(CoreError::Precondition(
            "domination check needs a compactly supported symbol (support hint required)".into(),
        ));
    }

    // LHS field: inverse transform of σ_k times the spectral tensor.
    let spectra = guarded_spectra(inputs, m)?;
    let refs: Vec<&Field> = spectra.iter().collect();
    let tensor = Field::tensor(&refs)?;
    let sym_values = sigma_k.materialized_field()?;
    let mut data = tensor.data().to_vec();
    for (idx, v) in data.iter_mut().enumerate() {
        *v *= sym_values.data()[idx];
    }
    let lhs_field = fft::inverse(&Field::from_data(*tensor.grid(), Space::Frequency, data)?)?;
    let mn_grid = *lhs_field.grid();

    // Norm factor: ‖σ_k(2^k ·)‖ in the smoothness norm with the first
    // exponent mn/s and second exponent 1.
    let (dilated, _) = dilate_symbol(sigma_k, level)?;
    let symbol_norm = symbol_sobolev_norm(&dilated, s, mn / s, 1.0)?;

    // Power maximal functions of the inputs over the dyadic radius family.
    let cfg = MaximalConfig::dyadic(q, &base);
    let maximals: Vec<Field> = inputs
        .iter()
        .map(|f| maximal_function(f, &cfg))
        .collect::<Result<Vec<_>>>()?;

    let mut samples = Vec::with_capacity(sample_points.len());
    let mut max_ratio = 0.0f64;
    for point in sample_points {
        if point.len() != m * n {
            return Err(CoreError::Mismatch(format!(
                "sample point has {} coordinates, expected {}",
                point.len(),
                m * n
            )));
        }
        let flat = mn_grid.encode_index(point);
        let lhs = lhs_field.data()[flat].norm();
        let mut rhs = symbol_norm;
        for (slot, maximal) in maximals.iter().enumerate() {
            let block = &point[slot * n..(slot + 1) * n];
            let slot_flat = base.encode_index(block);
            rhs *= maximal.data()[slot_flat].norm();
        }
        if rhs > 0.0 {
            max_ratio = max_ratio.max(lhs / rhs);
        }
        samples.push((lhs, rhs));
    }
    Ok(DominationReport {
        samples,
        max_ratio,
        symbol_norm,
    })
}
