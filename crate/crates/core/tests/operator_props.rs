//! Multiplier-operator properties: spectral/direct agreement in batch,
//! per-slot linearity, the transpose pairing identity, smoothness-norm
//! transfer under the coordinate map and under transposition, and the
//! pointwise domination diagnostic.

use hlab_core::bessel::lorentz_sobolev_norm;
use hlab_core::lp::psi_hat;
use hlab_core::multiplier::{
    apply, apply_cross_checked, coordinate_map, pointwise_domination_check, transpose_symbol,
};
use hlab_core::random::{band_limited_field, complex_gaussian, seeded};
use hlab_core::symbol::{symbol_sobolev_norm, MultiplierSymbol, SymbolFn};
use hlab_core::{Complex64, Field, Grid, Space};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use std::sync::Arc;

const COORDINATE_MAP_RATIO_CEIL: f64 = 2.5;
const TRANSPOSE_RATIO_CEIL: f64 = 2.0;
const TRANSPOSE_REFINEMENT_TOL: f64 = 0.15;
const DOMINATION_REFINEMENT_TOL: f64 = 0.15;

fn random_sampled_symbol(grid: Grid, rng: &mut ChaCha8Rng, radius: Option<f64>) -> MultiplierSymbol {
    let dim = grid.dim();
    let mut xi = vec![0.0f64; dim];
    let mut values = Field::zeros(grid, Space::Frequency);
    for idx in 0..grid.total_points() {
        grid.freq_coords_of(idx, &mut xi);
        let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        if radius.map_or(true, |cap| r <= cap) {
            values.data_mut()[idx] = complex_gaussian(rng);
        }
    }
    let sym = MultiplierSymbol::from_samples(2, dim / 2, values).unwrap();
    match radius {
        Some(cap) => sym.with_support_hint(0.0, cap).unwrap(),
        None => sym,
    }
}

/// Trigonometric modulation with phases on a fixed physical lattice; closed
/// form, so it samples identically on every grid over the same box.
fn trig_modulation(rng: &mut ChaCha8Rng, n_modes: usize) -> SymbolFn {
    let modes: Vec<(f64, f64, Complex64)> = (0..n_modes)
        .map(|_| {
            (
                0.25 * rng.gen_range(-8i32..=8) as f64,
                0.25 * rng.gen_range(-8i32..=8) as f64,
                complex_gaussian(rng),
            )
        })
        .collect();
    let scale = (n_modes as f64).sqrt().recip();
    Arc::new(move |xi: &[f64]| {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(a0, a1, c) in &modes {
            let phase = TAU * (a0 * xi[0] + a1 * xi[1]);
            acc += c * Complex64::new(phase.cos(), phase.sin());
        }
        acc * scale
    })
}

fn trig_polynomial(grid: Grid, rng: &mut ChaCha8Rng, n_modes: usize, max_wn: i64) -> Field {
    let fs = grid.freq_spacing();
    let modes: Vec<(f64, Complex64)> = (0..n_modes)
        .map(|_| {
            let j = rng.gen_range(1..=max_wn) * if rng.gen_bool(0.5) { 1 } else { -1 };
            (j as f64 * fs, complex_gaussian(rng))
        })
        .collect();
    let scale = (n_modes as f64).sqrt().recip();
    Field::from_fn(grid, Space::Physical, |x| {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(xi, c) in &modes {
            let phase = TAU * xi * x[0];
            acc += c * Complex64::new(phase.cos(), phase.sin());
        }
        acc * scale
    })
}

#[test]
fn spectral_route_matches_direct_summation_in_batch() {
    let base = Grid::new(1, 32, 4.0).unwrap();
    let product = base.with_dim(2).unwrap();
    for seed in 0..10u64 {
        let mut rng = seeded(seed, "route-batch");
        let sigma = random_sampled_symbol(product, &mut rng, None);
        let f = band_limited_field(base, 0.25, &mut rng).unwrap();
        let g = band_limited_field(base, 0.25, &mut rng).unwrap();
        let out = apply_cross_checked(&sigma, &[&f, &g]).unwrap();
        assert!(
            out.residual <= 1e-8,
            "seed {seed}: residual {}",
            out.residual
        );
    }
}

#[test]
fn application_is_linear_in_every_slot() {
    let base = Grid::new(1, 32, 4.0).unwrap();
    let product = base.with_dim(2).unwrap();
    let mut rng = seeded(7, "linearity");
    let sigma = random_sampled_symbol(product, &mut rng, None);
    let f = band_limited_field(base, 0.25, &mut rng).unwrap();
    let g = band_limited_field(base, 0.25, &mut rng).unwrap();
    let h = band_limited_field(base, 0.25, &mut rng).unwrap();
    let a = Complex64::new(1.3, -0.4);
    let b = Complex64::new(-0.7, 0.2);
    let combo = f.scale(a).add(&g.scale(b)).unwrap();

    for slot in 0..2usize {
        let assemble = |lead: &Field| -> Field {
            let inputs: [&Field; 2] = if slot == 0 { [lead, &h] } else { [&h, lead] };
            apply(&sigma, &inputs).unwrap().output
        };
        let lhs = assemble(&combo);
        let rhs = assemble(&f).scale(a).add(&assemble(&g).scale(b)).unwrap();
        let scale = rhs.sup_norm();
        let diff = lhs.sub(&rhs).unwrap().sup_norm();
        assert!(diff <= 1e-10 * scale, "slot {slot}: diff {diff}");
    }
}

#[test]
fn transpose_pairing_identity_in_batch() {
    let base = Grid::new(1, 32, 4.0).unwrap();
    let product = base.with_dim(2).unwrap();
    for seed in 0..6u64 {
        let mut rng = seeded(seed, "transpose-pairing");
        let sigma = random_sampled_symbol(product, &mut rng, Some(0.7));
        let f1 = band_limited_field(base, 0.25, &mut rng).unwrap();
        let f2 = band_limited_field(base, 0.25, &mut rng).unwrap();
        let h = band_limited_field(base, 0.25, &mut rng).unwrap();
        for j in 0..2usize {
            let transposed = transpose_symbol(&sigma, j).unwrap();
            let lhs = apply(&transposed, &[&f1, &f2])
                .unwrap()
                .output
                .pairing(&h)
                .unwrap();
            let swapped: [&Field; 2] = if j == 0 { [&h, &f2] } else { [&f1, &h] };
            let pivot = if j == 0 { &f1 } else { &f2 };
            let rhs = apply(&sigma, &swapped)
                .unwrap()
                .output
                .pairing(pivot)
                .unwrap();
            let scale = lhs.norm().max(rhs.norm()).max(1e-30);
            assert!(
                (lhs - rhs).norm() <= 1e-8 * scale,
                "seed {seed}, slot {j}: {lhs} vs {rhs}"
            );
        }
    }
}

#[test]
fn coordinate_map_controls_smoothness_norms() {
    let grid = Grid::new(2, 64, 8.0).unwrap();
    let mut worst = 0.0f64;
    for seed in 0..50u64 {
        let mut rng = seeded(seed, "coordinate-map");
        let f = band_limited_field(grid, 0.5, &mut rng).unwrap();
        let mapped = coordinate_map(&f, 2, 0).unwrap();
        for &(s, p, q) in &[(0.8, 2.0, 1.0), (1.2, 3.0, 2.0)] {
            let num = lorentz_sobolev_norm(&mapped, s, p, q).unwrap();
            let den = lorentz_sobolev_norm(&f, s, p, q).unwrap();
            worst = worst.max(num / den);
        }
    }
    println!("largest coordinate-map norm ratio: {worst:.4}");
    assert!(worst <= COORDINATE_MAP_RATIO_CEIL);
}

#[test]
fn transpose_transfers_band_norms_within_a_bounded_factor() {
    let mut ratios_by_grid = Vec::new();
    for points in [64usize, 128] {
        let grid = Grid::new(2, points, 8.0).unwrap();
        let mut rng = seeded(11, "transpose-norms");
        let modulation = trig_modulation(&mut rng, 8);
        let envelope = hlab_core::lp::PlateauProfile::new(0.5, 0.7, 1.4, 2.0).unwrap();
        let base_form: SymbolFn = {
            let modulation = modulation.clone();
            let envelope = envelope.clone();
            Arc::new(move |xi: &[f64]| {
                let r = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
                modulation(xi) * envelope.eval(r)
            })
        };
        let sigma = MultiplierSymbol::from_closed_form(2, 1, grid, base_form)
            .unwrap()
            .with_support_hint(0.5, 2.0)
            .unwrap();

        let banded_sup = |sym: &MultiplierSymbol| -> f64 {
            let mut sup = 0.0f64;
            for k in -1i32..=1 {
                let form = sym.closed_form().cloned().unwrap();
                let factor = 2f64.powi(k);
                let product: SymbolFn = Arc::new(move |xi: &[f64]| {
                    let r = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
                    form(&[xi[0] * factor, xi[1] * factor]) * psi_hat(r)
                });
                let banded = MultiplierSymbol::from_closed_form(2, 1, grid, product)
                    .unwrap()
                    .with_support_hint(0.5, 2.0)
                    .unwrap();
                sup = sup.max(symbol_sobolev_norm(&banded, 1.2, 2.0, 2.0).unwrap());
            }
            sup
        };

        let base_sup = banded_sup(&sigma);
        for j in 0..2usize {
            let transposed = transpose_symbol(&sigma, j).unwrap();
            let ratio = banded_sup(&transposed) / base_sup;
            println!("M = {points}, slot {j}: transpose norm ratio {ratio:.4}");
            assert!(
                ratio <= TRANSPOSE_RATIO_CEIL && ratio >= 1.0 / TRANSPOSE_RATIO_CEIL,
                "ratio {ratio}"
            );
            ratios_by_grid.push(ratio);
        }
    }
    for j in 0..2 {
        let drift = (ratios_by_grid[2 + j] / ratios_by_grid[j] - 1.0).abs();
        assert!(
            drift <= TRANSPOSE_REFINEMENT_TOL,
            "slot {j}: transpose ratio drift {drift}"
        );
    }
}

#[test]
fn domination_ratio_is_refinement_stable() {
    let mut maxima = Vec::new();
    for points in [64usize, 128] {
        let base = Grid::new(1, points, 8.0).unwrap();
        let product = base.with_dim(2).unwrap();
        let mut rng = seeded(3, "domination");
        let modulation = trig_modulation(&mut rng, 6);
        let form: SymbolFn = Arc::new(move |xi: &[f64]| {
            let r = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
            modulation(xi) * psi_hat(r)
        });
        let sigma_k = MultiplierSymbol::from_closed_form(2, 1, product, form)
            .unwrap()
            .with_support_hint(0.5, 2.0)
            .unwrap();
        let sample_points: Vec<Vec<usize>> = (0..10)
            .map(|_| vec![rng.gen_range(0..points), rng.gen_range(0..points)])
            .collect();
        let mut worst = 0.0f64;
        for seed in 0..50u64 {
            let mut frng = seeded(seed, "domination-fields");
            let f1 = trig_polynomial(base, &mut frng, 16, 7);
            let f2 = trig_polynomial(base, &mut frng, 16, 7);
            let report =
                pointwise_domination_check(&sigma_k, &[&f1, &f2], 0, 1.8, 1.3, &sample_points)
                    .unwrap();
            assert!(report.max_ratio.is_finite());
            worst = worst.max(report.max_ratio);
        }
        println!("domination ratio max at M = {points}: {worst:.4}");
        assert!(worst > 0.0);
        maxima.push(worst);
    }
    let drift = (maxima[1] / maxima[0] - 1.0).abs();
    assert!(
        drift <= DOMINATION_REFINEMENT_TOL,
        "domination ratio drift {drift}"
    );
}
