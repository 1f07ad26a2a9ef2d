//! Decreasing rearrangements and Lorentz norms `‖·‖_{p,q}` on grid data.
//!
//! Grid samples are atoms of equal measure (the cell measure of the field's
//! side), so the decreasing rearrangement is an exact step function and every
//! Lorentz norm has a closed form: no quadrature is involved anywhere in this
//! module.

use crate::sum::NeumaierSum;
use crate::{CoreError, Field, Result};

/// Exact decreasing rearrangement of equal-measure atoms.
///
/// `eval(t)` equals value `v_i` on `[t_{i-1}, t_i)` where `t_i` is the
/// cumulative measure after step `i`; it is `0` for `t` past the support.
#[derive(Clone, Debug)]
pub struct Rearrangement {
    /// `(right endpoint t_i, value v_i)`, values strictly decreasing, all
    /// values positive.
    steps: Vec<(f64, f64)>,
    /// Single-atom measure the steps were built from.
    atom_measure: f64,
}

impl Rearrangement {
    /// Rearrange explicit magnitudes with a common atom measure.
    pub fn from_magnitudes(mut mags: Vec<f64>, atom_measure: f64) -> Result<Self> {
        if !(atom_measure.is_finite() && atom_measure > 0.0) {
            return Err(CoreError::InvalidParameter(format!(
                "atom measure must be positive, got {atom_measure}"
            )));
        }
        if mags.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(CoreError::Precondition(
                "magnitudes must be finite and nonnegative".into(),
            ));
        }
        mags.sort_unstable_by(|a, b| b.total_cmp(a));
        let mut steps: Vec<(f64, f64)> = Vec::new();
        let mut count = 0usize;
        for &v in &mags {
            if v == 0.0 {
                break;
            }
            count += 1;
            match steps.last_mut() {
                Some(last) if last.1 == v => last.0 = count as f64 * atom_measure,
                _ => steps.push((count as f64 * atom_measure, v)),
            }
        }
        Ok(Self {
            steps,
            atom_measure,
        })
    }

    /// Rearrange a field's sample magnitudes, atoms weighted by its cell
    /// measure (physical or frequency side as tagged).
    pub fn of_field(field: &Field) -> Self {
        let mags = field.data().iter().map(|z| z.norm()).collect();
        Self::from_magnitudes(mags, field.cell_measure())
            .expect("field magnitudes are finite and nonnegative")
    }

    /// Measure of the set where the samples are nonzero.
    pub fn support_measure(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.0)
    }

    pub fn max_value(&self) -> f64 {
        self.steps.first().map_or(0.0, |s| s.1)
    }

    pub fn is_zero(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn atom_measure(&self) -> f64 {
        self.atom_measure
    }

    /// Step endpoints and values, decreasing in value.
    pub fn steps(&self) -> &[(f64, f64)] {
        &self.steps
    }

    /// `f*(t)`: right-continuous step evaluation, `0` past the support.
    pub fn eval(&self, t: f64) -> f64 {
        if t < 0.0 {
            return self.max_value();
        }
        // First step whose right endpoint exceeds t.
        match self.steps.iter().find(|(ti, _)| t < *ti) {
            Some(&(_, v)) => v,
            None => 0.0,
        }
    }

    /// Distribution function `d_f(s)`: measure of `{|f| > s}`.
    pub fn distribution(&self, s: f64) -> f64 {
        // Steps are decreasing in value, so the super-level set is the union
        // of the leading steps with value above `s`.
        let mut measure = 0.0;
        for &(ti, vi) in &self.steps {
            if vi > s {
                measure = ti;
            } else {
                break;
            }
        }
        measure
    }

    /// Lorentz norm `‖f‖_{p,q}` from the step representation.
    ///
    /// For finite `q` each step contributes
    /// `v_i^q · (p/q)(t_i^{q/p} − t_{i-1}^{q/p})`, the closed-form value of
    /// `∫ (t^{1/p} v_i)^q dt/t` over the step.  For `q = ∞` the supremum of
    /// `t^{1/p} f*(t)` is attained in the limit at right endpoints.
    pub fn lorentz_norm(&self, p: f64, q: f64) -> Result<f64> {
        check_exponents(p, q)?;
        if self.steps.is_empty() {
            return Ok(0.0);
        }
        if q.is_infinite() {
            // With p = ∞ the factor t^{1/p} degenerates to 1 and this is the
            // essential supremum.
            let inv_p = if p.is_infinite() { 0.0 } else { 1.0 / p };
            let mut best = 0.0f64;
            for &(ti, vi) in &self.steps {
                best = best.max(ti.powf(inv_p) * vi);
            }
            return Ok(best);
        }
        let mut acc = NeumaierSum::new();
        let mut prev = 0.0f64;
        for &(ti, vi) in &self.steps {
            acc.add(vi.powf(q) * (ti.powf(q / p) - prev));
            prev = ti.powf(q / p);
        }
        Ok(((p / q) * acc.value()).powf(1.0 / q))
    }
}

fn check_exponents(p: f64, q: f64) -> Result<()> {
    if !(p > 0.0) || p.is_nan() {
        return Err(CoreError::InvalidParameter(format!(
            "primary exponent must lie in (0, ∞], got {p}"
        )));
    }
    if !(q > 0.0) || q.is_nan() {
        return Err(CoreError::InvalidParameter(format!(
            "secondary exponent must lie in (0, ∞], got {q}"
        )));
    }
    if p.is_infinite() && q.is_finite() {
        return Err(CoreError::InvalidParameter(format!(
            "primary exponent ∞ requires secondary exponent ∞, got {q}"
        )));
    }
    Ok(())
}

/// `‖f‖_{p,q}` of a field (either side; the matching cell measure is used).
pub fn lorentz_norm(field: &Field, p: f64, q: f64) -> Result<f64> {
    Rearrangement::of_field(field).lorentz_norm(p, q)
}

/// Conjugate exponent `p′` with `1/p + 1/p′ = 1`; `p = 1 ↦ ∞`, `p = ∞ ↦ 1`.
pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// Best constant in `‖f‖_{p,q_to} ≤ C·‖f‖_{p,q_from}` for `q_from ≤ q_to`
/// on general measure spaces: `C = (q_from/p)^{1/q_from − 1/q_to}`.
pub fn embedding_constant(p: f64, q_from: f64, q_to: f64) -> Result<f64> {
    check_exponents(p, q_from)?;
    check_exponents(p, q_to)?;
    if q_from > q_to {
        return Err(CoreError::InvalidParameter(
            "embedding runs from smaller to larger secondary exponent".into(),
        ));
    }
    if q_from.is_infinite() {
        return Ok(1.0);
    }
    let inv_to = if q_to.is_infinite() { 0.0 } else { 1.0 / q_to };
    Ok((q_from / p).powf(1.0 / q_from - inv_to))
}

/// Closed-form `‖1_E‖_{p,q}` for an indicator of a set of measure `a`.
pub fn indicator_norm(a: f64, p: f64, q: f64) -> Result<f64> {
    check_exponents(p, q)?;
    if a == 0.0 {
        return Ok(0.0);
    }
    if q.is_infinite() {
        let inv_p = if p.is_infinite() { 0.0 } else { 1.0 / p };
        Ok(a.powf(inv_p))
    } else {
        Ok((p / q).powf(1.0 / q) * a.powf(1.0 / p))
    }
}

/// Measure of the super-level set `{x : |f(x)| > s}` in the field's own
/// cell measure.
pub fn distribution_function(field: &Field, s: f64) -> f64 {
    let count = field.data().iter().filter(|z| z.norm() > s).count();
    count as f64 * field.cell_measure()
}

/// Both sides of the Lorentz Hölder inequality
/// `∫|f·g| ≤ ‖f‖_{p,q}·‖g‖_{p′,q′}` for `1 < p < ∞`, `1 ≤ q ≤ ∞`.
///
/// Returns `(lhs, rhs)`; callers assert the comparison with their own slack.
pub fn holder_pairing(f: &Field, g: &Field, p: f64, q: f64) -> Result<(f64, f64)> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(CoreError::InvalidParameter(format!(
            "pairing exponent must lie in (1, ∞), got {p}"
        )));
    }
    if !(q >= 1.0) || q.is_nan() {
        return Err(CoreError::InvalidParameter(format!(
            "secondary exponent must lie in [1, ∞], got {q}"
        )));
    }
    if f.grid() != g.grid() || f.space() != g.space() {
        return Err(CoreError::Mismatch(
            "pairing requires matching grids and sides".into(),
        ));
    }
    let product = Field::from_data(
        *f.grid(),
        f.space(),
        f.data()
            .iter()
            .zip(g.data())
            .map(|(a, b)| crate::Complex64::new(a.norm() * b.norm(), 0.0))
            .collect(),
    )?;
    let lhs = product.integrate().re;
    let rhs = lorentz_norm(f, p, q)? * lorentz_norm(g, conjugate_exponent(p), conjugate_exponent(q))?;
    Ok((lhs, rhs))
}
