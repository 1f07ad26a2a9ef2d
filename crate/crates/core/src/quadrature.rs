//! One-dimensional quadrature: fixed-node composite Gauss–Legendre rules,
//! an adaptive Simpson reference integrator, and the Bessel kernel used by
//! radial (2-d) Fourier transforms.
//!
//! The composite rule deliberately exposes its node structure: its value is a
//! positive-weight combination of integrand samples at nodes that depend only
//! on the interval and panel count.  Monotone pointwise orderings between
//! integrands therefore transfer to the quadrature values exactly, which the
//! sweep experiments rely on.

use crate::sum::NeumaierSum;

/// Positive-half abscissae of the 16-point Gauss–Legendre rule on `[-1, 1]`.
const GL16_NODES: [f64; 8] = [
    0.095012509837637440185,
    0.281603550779258913230,
    0.458016777657227386342,
    0.617876244402643748447,
    0.755404408355003033895,
    0.865631202387831743880,
    0.944575023073232576078,
    0.989400934991649932596,
];

/// Matching weights (each serves the node and its negative).
const GL16_WEIGHTS: [f64; 8] = [
    0.189450610455068496285,
    0.182603415044923588867,
    0.169156519395002538189,
    0.149595988816576732081,
    0.124628971255533872052,
    0.095158511682492784810,
    0.062253523938647892863,
    0.027152459411754094852,
];

/// Single-panel 16-point Gauss–Legendre on `[a, b]`.
pub fn gauss_legendre_16(a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = NeumaierSum::new();
    for i in 0..8 {
        let dx = half * GL16_NODES[i];
        acc.add(GL16_WEIGHTS[i] * (f(mid - dx) + f(mid + dx)));
    }
    half * acc.value()
}

/// Composite 16-point Gauss–Legendre over `panels` equal subintervals of
/// `[a, b]`, summed left to right with compensation.
pub fn composite_gauss_legendre(
    a: f64,
    b: f64,
    panels: usize,
    mut f: impl FnMut(f64) -> f64,
) -> f64 {
    assert!(panels > 0 && b >= a);
    let width = (b - a) / panels as f64;
    let mut acc = NeumaierSum::new();
    for p in 0..panels {
        let lo = a + p as f64 * width;
        acc.add(gauss_legendre_16(lo, lo + width, &mut f));
    }
    acc.value()
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

fn adaptive_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Adaptive Simpson integration; reference oracle for the fixed-node rules.
pub fn adaptive_simpson(a: f64, b: f64, tol: f64, f: &impl Fn(f64) -> f64) -> f64 {
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(fa, fm, fb, b - a);
    adaptive_step(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Bessel function of the first kind, order zero.
pub fn bessel_j0(x: f64) -> f64 {
    libm::j0(x)
}

/// Radial 2-d Fourier transform (Hankel transform of order zero):
/// `g(ρ) = 2π ∫_0^R f(r) J₀(2πrρ) r dr`.
///
/// Panels are sized to resolve both the kernel oscillation (wavelength
/// `1/ρ`) and the profile itself, with at least four panels per unit radius
/// or half-oscillation, whichever is finer.
pub fn radial_fourier_2d(radius: f64, rho: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    assert!(radius > 0.0 && rho >= 0.0);
    let per_unit = (4.0_f64).max(8.0 * rho);
    let panels = (radius * per_unit).ceil() as usize;
    let tau = std::f64::consts::TAU;
    tau * composite_gauss_legendre(0.0, radius, panels.max(1), |r| {
        f(r) * bessel_j0(tau * r * rho) * r
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gl16_exact_on_polynomials() {
        // Degree ≤ 31 is integrated exactly by a 16-point rule.
        for k in [0u32, 3, 10, 21, 31] {
            let got = gauss_legendre_16(0.0, 1.0, |x| x.powi(k as i32));
            let expect = 1.0 / (k as f64 + 1.0);
            assert!(
                (got - expect).abs() < 1e-14 * expect.max(1.0),
                "degree {k}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn composite_matches_adaptive_on_oscillatory() {
        // ∫_0^3 sin(40x) dx = (1 − cos 120)/40.
        let f = |x: f64| (40.0 * x).sin();
        let exact = (1.0 - (120.0f64).cos()) / 40.0;
        let comp = composite_gauss_legendre(0.0, 3.0, 60, f);
        let adap = adaptive_simpson(0.0, 3.0, 1e-12, &f);
        assert!((comp - exact).abs() < 1e-12);
        assert!((adap - exact).abs() < 1e-9);
    }

    #[test]
    fn bessel_reference_values() {
        assert_eq!(bessel_j0(0.0), 1.0);
        assert!((bessel_j0(1.0) - 0.7651976865579666).abs() < 1e-12);
        assert!((bessel_j0(10.0) - (-0.2459357644513483)).abs() < 1e-12);
        // First zero.
        assert!(bessel_j0(2.404825557695773).abs() < 1e-12);
    }

    #[test]
    fn radial_transform_fixes_gaussian() {
        // In two dimensions e^{−π|x|²} is its own transform, so the radial
        // profile must reproduce e^{−πρ²}.  Truncation at r = 6 leaves an
        // error far below the tolerance.
        for rho in [0.0, 0.5, 1.0, 1.7] {
            let got = radial_fourier_2d(6.0, rho, |r| (-PI * r * r).exp());
            let expect = (-PI * rho * rho).exp();
            assert!((got - expect).abs() < 1e-10, "rho={rho}: {got} vs {expect}");
        }
    }
}
