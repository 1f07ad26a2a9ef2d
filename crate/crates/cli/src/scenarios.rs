//! The nine named experiments behind the `hlab` binary.
//!
//! Each runner draws its instances from counter-seeded generators, delegates
//! every asserted inequality to a core routine, and returns labeled metrics.
//! Thresholds come from [`RunConfig::threshold`], so a config file can
//! tighten or relax them without recompiling.  Ratio scenarios report the
//! empirical maximum at two resolutions and assert refinement stability
//! instead of an absolute constant.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::sync::Arc;

use anyhow::{bail, ensure};
use hlab_core::fft;
use hlab_core::lorentz::{holder_pairing, indicator_norm, lorentz_norm};
use hlab_core::lp::{decompose, psi_hat, LPFamily, PlateauProfile};
use hlab_core::multiplier::{
    apply, apply_cross_checked, pointwise_domination_check, transpose_symbol,
};
use hlab_core::random::{band_limited_field, complex_gaussian, seeded};
use hlab_core::region::{
    classify_against_polygon, hull_polygon_vertices, sample_hull_point, ExponentRegion,
};
use hlab_core::sharpness::{
    growth_sweep, truncated_kernel_mass, SharpnessParams, SweepCurve,
};
use hlab_core::symbol::{symbol_sobolev_norm, MultiplierSymbol, SymbolFn};
use hlab_core::{Complex64, Field, Grid, Space};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::{FieldDumps, Metric, RunConfig};

type Env = BTreeMap<String, String>;

fn echo_grid(env: &mut Env, key: &str, grid: &Grid) {
    env.insert(
        key.into(),
        format!(
            "{}d, {} points per axis, half-width {}",
            grid.dim(),
            grid.points_per_axis(),
            grid.half_width()
        ),
    );
}

/// Random frequency-side symbol sampled cell by cell, optionally confined to
/// `|ξ⃗| ≤ radius` (with the matching support hint).
fn random_sampled_symbol(
    grid: Grid,
    rng: &mut ChaCha8Rng,
    radius: Option<f64>,
) -> anyhow::Result<MultiplierSymbol> {
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
    let sym = MultiplierSymbol::from_samples(2, dim / 2, values)?;
    Ok(match radius {
        Some(cap) => sym.with_support_hint(0.0, cap)?,
        None => sym,
    })
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

/// Band-limited trigonometric polynomial on the grid's own wavenumber
/// lattice; the draw depends only on the box, not the sample count.
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

/// Spectral route vs direct summation on random bilinear instances.
pub(crate) fn verify_core(cfg: &RunConfig, env: &mut Env) -> anyhow::Result<Vec<Metric>> {
    let base = Grid::new(1, cfg.grid_m.unwrap_or(32), cfg.half_width.unwrap_or(4.0))?;
    let product = base.with_dim(2)?;
    echo_grid(env, "grid", &base);
    env.insert("arity".into(), "2".into());
    const INSTANCES: u64 = 20;
    let mut worst = 0.0f64;
    for i in 0..INSTANCES {
        let mut rng = seeded(cfg.seed.wrapping_add(i), "spectral-vs-direct");
        let sigma = random_sampled_symbol(product, &mut rng, None)?;
        let f = band_limited_field(base, 0.25, &mut rng)?;
        let g = band_limited_field(base, 0.25, &mut rng)?;
        let out = apply_cross_checked(&sigma, &[&f, &g])?;
        worst = worst.max(out.residual);
    }
    Ok(vec![
        Metric::info("instances", INSTANCES as f64),
        Metric::ceiling(
            "max spectral vs direct residual",
            worst,
            cfg.threshold("residual", 1e-8),
        ),
    ])
}

/// Indicator closed forms and the diagonal-norm identity.
pub(crate) fn verify_lorentz(cfg: &RunConfig, env: &mut Env) -> anyhow::Result<Vec<Metric>> {
    let grid = Grid::new(1, cfg.grid_m.unwrap_or(256), cfg.half_width.unwrap_or(8.0))?;
    echo_grid(env, "grid", &grid);
    let h = grid.cell_volume();

    // Indicators of exactly K cells have measure K·h, so the two-parameter
    // closed form is exact up to rounding.
    let mut worst_indicator = 0.0f64;
    let mut pair_idx = 0usize;
    for &p in &[1.5f64, 2.0, 3.0] {
        for &q in &[1.0f64, 2.0, f64::INFINITY] {
            pair_idx += 1;
            let cells = 16 * pair_idx;
            ensure!(
                cells <= grid.total_points(),
                "indicator needs {cells} cells but the grid has {}",
                grid.total_points()
            );
            let mut ind = Field::zeros(grid, Space::Physical);
            for c in 0..cells {
                ind.data_mut()[c] = Complex64::new(1.0, 0.0);
            }
            let measured = lorentz_norm(&ind, p, q)?;
            let closed = indicator_norm(cells as f64 * h, p, q)?;
            worst_indicator = worst_indicator.max((measured - closed).abs() / closed);
        }
    }

    let mut worst_diagonal = 0.0f64;
    const FIELDS: u64 = 50;
    for i in 0..FIELDS {
        let mut rng = seeded(cfg.seed.wrapping_add(i), "diagonal-norms");
        let f = band_limited_field(grid, 0.5, &mut rng)?;
        let p = [1.0, 1.5, 2.0, 3.0][(i % 4) as usize];
        let a = lorentz_norm(&f, p, p)?;
        let b = f.lp_norm(p);
        worst_diagonal = worst_diagonal.max((a - b).abs() / b);
    }

    Ok(vec![
        Metric::info("indicator pairs", pair_idx as f64),
        Metric::ceiling(
            "max indicator closed-form gap",
            worst_indicator,
            cfg.threshold("indicator", 1e-10),
        ),
        Metric::info("diagonal fields", FIELDS as f64),
        Metric::ceiling(
            "max diagonal norm gap",
            worst_diagonal,
            cfg.threshold("diagonal", 1e-12),
        ),
    ])
}

/// The three constant-one inequalities: convolution on the unit-measure box,
/// transform ratios against their pure-tone caps, and the dual pairing.
pub(crate) fn verify_lemmas(cfg: &RunConfig, env: &mut Env) -> anyhow::Result<Vec<Metric>> {
    let slack = 1.0 + cfg.threshold("slack", 1e-6);

    // Convolution: on a box of measure one the p-scale is monotone with
    // constant one, so the inequality holds at the weaker first exponent.
    let young_grid = Grid::new(1, cfg.grid_m.unwrap_or(512), 0.5)?;
    echo_grid(env, "convolution-grid", &young_grid);
    const YOUNG: u64 = 200;
    let mut worst_young = 0.0f64;
    for i in 0..YOUNG {
        let mut rng = seeded(cfg.seed.wrapping_add(i), "young");
        let f = band_limited_field(young_grid, 0.5, &mut rng)?;
        let g = band_limited_field(young_grid, 0.5, &mut rng)?;
        let conv = fft::convolve(&f, &g)?;
        let lhs = lorentz_norm(&conv, 2.4, 1.0)?;
        let rhs = lorentz_norm(&f, 2.0, 1.0)? * g.lp_norm(1.2);
        if rhs > 0.0 {
            worst_young = worst_young.max(lhs / rhs);
        }
    }

    // Transform: a pure tone concentrates in one spectral cell and meets the
    // cap (p/p′)^{1/r} exactly; spread-out ensembles stay below it.
    let line = Grid::new(1, cfg.grid_m.unwrap_or(256), cfg.half_width.unwrap_or(8.0))?;
    echo_grid(env, "transform-grid", &line);
    let freq_grid = line.frequency_reinterpretation();
    let spectrum_of = |f: &Field| -> anyhow::Result<Field> {
        Ok(fft::forward(f)?.with_grid(freq_grid, Space::Physical)?)
    };
    let tone = Field::from_fn(line, Space::Physical, |x| {
        let phase = TAU * 5.0 * line.freq_spacing() * x[0];
        Complex64::new(phase.cos(), phase.sin())
    });
    let tone_spectrum = spectrum_of(&tone)?;
    let mut worst_tone_gap = 0.0f64;
    let mut worst_transform = 0.0f64;
    let mut transform_count = 0u64;
    for &p in &[3.0f64, 4.0] {
        let dual = p / (p - 1.0);
        for &r in &[1.0f64, 2.0, f64::INFINITY] {
            let cap = if r.is_finite() {
                (p / dual).powf(1.0 / r)
            } else {
                1.0
            };
            let tone_ratio =
                lorentz_norm(&tone_spectrum, p, r)? / lorentz_norm(&tone, dual, r)?;
            worst_tone_gap = worst_tone_gap.max((tone_ratio - cap).abs() / cap);
            for i in 0..34u64 {
                let mut rng = seeded(cfg.seed.wrapping_add(i), "transform-ensemble");
                let f = band_limited_field(line, 0.5, &mut rng)?;
                let spectrum = spectrum_of(&f)?;
                let ratio = lorentz_norm(&spectrum, p, r)? / lorentz_norm(&f, dual, r)?;
                worst_transform = worst_transform.max(ratio / cap);
                transform_count += 1;
            }
        }
    }

    const PAIRS: u64 = 200;
    let mut worst_pairing = 0.0f64;
    for i in 0..PAIRS {
        let mut rng = seeded(cfg.seed.wrapping_add(i), "holder-pairing");
        let f = band_limited_field(line, 0.5, &mut rng)?;
        let g = band_limited_field(line, 0.5, &mut rng)?;
        let (lhs, rhs) = holder_pairing(&f, &g, 3.0, 1.5)?;
        if rhs > 0.0 {
            worst_pairing = worst_pairing.max(lhs / rhs);
        }
    }

    Ok(vec![
        Metric::info("convolution instances", YOUNG as f64),
        Metric::ceiling("max convolution ratio", worst_young, slack),
        Metric::info("transform instances", transform_count as f64),
        Metric::ceiling(
            "max tone saturation gap",
            worst_tone_gap,
            cfg.threshold("tone", 1e-9),
        ),
        Metric::ceiling("max transform ratio over cap", worst_transform, slack),
        Metric::info("pairing instances", PAIRS as f64),
        Metric::ceiling("max pairing ratio", worst_pairing, slack),
    ])
}

/// Partition-of-unity defect on the certificate band plus reconstruction of
/// fifty randomly masked symbols.
pub(crate) fn decompose_check(
    cfg: &RunConfig,
    env: &mut Env,
    dumps: &mut FieldDumps,
) -> anyhow::Result<Vec<Metric>> {
    let base = Grid::new(1, cfg.grid_m.unwrap_or(64), cfg.half_width.unwrap_or(8.0))?;
    let fam = LPFamily::build(2, 1, (-4, 1), base)?;
    echo_grid(env, "grid", &base);
    env.insert("window".into(), format!("{:?}", fam.window()));
    let (cert_lo, cert_hi) = fam.certificate_band();
    env.insert(
        "certificate-band".into(),
        format!("[{cert_lo}, {cert_hi}]"),
    );

    let (k_min, k_max) = fam.window();
    const SCAN: usize = 2048;
    let mut worst_defect = 0.0f64;
    for i in 0..SCAN {
        let r = cert_lo * (cert_hi / cert_lo).powf(i as f64 / (SCAN - 1) as f64);
        let mut sum = 0.0f64;
        for k in k_min..=k_max {
            sum += fam.psi_level(r, k);
        }
        worst_defect = worst_defect.max((sum - 1.0).abs());
    }

    let mn_grid = fam.mn_grid()?;
    const SYMBOLS: u64 = 50;
    let mut worst_recon = 0.0f64;
    let mut worst_split = 0.0f64;
    for i in 0..SYMBOLS {
        let mut rng = seeded(cfg.seed.wrapping_add(i), "masked-symbol");
        let lo = rng.gen_range(0.08..0.5);
        let hi = rng.gen_range(0.8..1.9);
        let mut values = Field::zeros(mn_grid, Space::Frequency);
        let mut xi = [0.0f64; 2];
        for idx in 0..mn_grid.total_points() {
            mn_grid.freq_coords_of(idx, &mut xi);
            let leading = xi[0].abs().max(xi[1].abs());
            if leading >= lo && leading <= hi {
                values.data_mut()[idx] = complex_gaussian(&mut rng);
            }
        }
        let sigma = MultiplierSymbol::from_samples(2, 1, values)?;
        let target = sigma.materialized_field()?;
        let d = decompose(&sigma, &fam)?;
        let scale = sigma.max_abs()?;
        let recon = d.reconstruction()?.sub(&target)?.sup_norm() / scale;
        let split = d
            .low()
            .materialized_field()?
            .add(&d.high().materialized_field()?)?
            .sub(&d.part(0).materialized_field()?)?
            .sup_norm()
            / scale;
        worst_recon = worst_recon.max(recon);
        worst_split = worst_split.max(split);
    }

    let mut profile = String::from("r,psi,phi,theta,gamma,lambda\n");
    const ROWS: usize = 512;
    let top = 1.1 * 2f64.powi(k_max + 1);
    for i in 0..ROWS {
        let r = top * i as f64 / (ROWS - 1) as f64;
        profile.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r,
            fam.psi_hat(r),
            fam.phi_hat(r),
            fam.theta_hat(r),
            fam.gamma_hat(r),
            fam.lambda_hat(r)
        ));
    }
    dumps.files.insert("window_profiles.csv".into(), profile);

    Ok(vec![
        Metric::info("partition scan points", SCAN as f64),
        Metric::ceiling(
            "max partition defect",
            worst_defect,
            cfg.threshold("partition", 1e-9),
        ),
        Metric::info("masked symbols", SYMBOLS as f64),
        Metric::ceiling(
            "max reconstruction gap",
            worst_recon,
            cfg.threshold("reconstruction", 1e-9),
        ),
        Metric::ceiling(
            "max low/high split gap",
            worst_split,
            cfg.threshold("split", 1e-9),
        ),
    ])
}

/// Empirical bound ratio: output norm against the banded symbol-norm
/// supremum times the input norms, checked for refinement stability.
pub(crate) fn theorem1_ratio(cfg: &RunConfig, env: &mut Env) -> anyhow::Result<Vec<Metric>> {
    let fine = cfg.grid_m.unwrap_or(512);
    ensure!(
        fine >= 64 && fine % 2 == 0,
        "ratio scenario needs an even sample count of at least 64, got {fine}"
    );
    let l = cfg.half_width.unwrap_or(8.0);
    const INSTANCES: u64 = 20;
    // Smoothness and norm indices for the banded supremum; output and input
    // Lebesgue exponents form the dual pair 2 = (1/4 + 1/4)⁻¹.
    let (s, norm_p, norm_q) = (1.3f64, 2.0 / 1.3, 1.0f64);
    let (p_in, p_out) = (4.0f64, 2.0f64);
    env.insert("smoothness".into(), s.to_string());
    env.insert("input-exponent".into(), p_in.to_string());
    env.insert("output-exponent".into(), p_out.to_string());

    let mut maxima = Vec::new();
    for m_pts in [fine / 2, fine] {
        let base = Grid::new(1, m_pts, l)?;
        let product = base.with_dim(2)?;
        if maxima.is_empty() {
            echo_grid(env, "coarse-grid", &base);
        } else {
            echo_grid(env, "fine-grid", &base);
        }
        let mut worst = 0.0f64;
        for i in 0..INSTANCES {
            let mut rng = seeded(cfg.seed.wrapping_add(i), "admissible-symbol");
            let modulation = trig_modulation(&mut rng, 8);
            let envelope = PlateauProfile::new(0.5, 0.7, 1.4, 2.0)?;
            let form: SymbolFn = {
                let envelope = envelope.clone();
                Arc::new(move |xi: &[f64]| {
                    let r = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
                    modulation(xi) * envelope.eval(r)
                })
            };
            let sigma = MultiplierSymbol::from_closed_form(2, 1, product, form)?
                .with_support_hint(0.5, 2.0)?;
            let f1 = trig_polynomial(base, &mut rng, 24, 30);
            let f2 = trig_polynomial(base, &mut rng, 24, 30);
            let numerator = apply(&sigma, &[&f1, &f2])?.output.lp_norm(p_out);
            let mut sup = 0.0f64;
            for k in -1i32..=1 {
                let factor = 2f64.powi(k);
                let base_form = sigma.closed_form().cloned().expect("built from closed form");
                let banded_form: SymbolFn = Arc::new(move |xi: &[f64]| {
                    let r = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
                    base_form(&[xi[0] * factor, xi[1] * factor]) * psi_hat(r)
                });
                let banded = MultiplierSymbol::from_closed_form(2, 1, product, banded_form)?
                    .with_support_hint(0.5, 2.0)?;
                sup = sup.max(symbol_sobolev_norm(&banded, s, norm_p, norm_q)?);
            }
            let denominator = sup * f1.lp_norm(p_in) * f2.lp_norm(p_in);
            if denominator > 0.0 {
                worst = worst.max(numerator / denominator);
            }
        }
        maxima.push(worst);
    }
    let drift = (maxima[1] / maxima[0] - 1.0).abs();
    Ok(vec![
        Metric::info("instances per resolution", INSTANCES as f64),
        Metric::info("max ratio at half resolution", maxima[0]),
        Metric::floor("max ratio at full resolution", maxima[1], f64::MIN_POSITIVE),
        Metric::ceiling("refinement drift", drift, cfg.threshold("drift", 0.10)),
    ])
}

/// Pointwise domination of the band-cut operator by the symbol norm times
/// power maximal averages, checked for refinement stability.
pub(crate) fn lemma31_check(cfg: &RunConfig, env: &mut Env) -> anyhow::Result<Vec<Metric>> {
    let fine = cfg.grid_m.unwrap_or(128);
    ensure!(
        fine >= 16 && fine % 2 == 0,
        "domination scenario needs an even sample count of at least 16, got {fine}"
    );
    let l = cfg.half_width.unwrap_or(8.0);
    let mut srng = seeded(cfg.seed, "domination-symbol");
    let modulation = trig_modulation(&mut srng, 6);
    let form: SymbolFn = Arc::new(move |xi: &[f64]| {
        let r = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
        modulation(xi) * psi_hat(r)
    });
    // Sample positions live on the coarse lattice so both resolutions probe
    // exactly the same physical points.
    let coarse = fine / 2;
    let mut prng = seeded(cfg.seed, "domination-points");
    let coarse_indices: Vec<[usize; 2]> = (0..10)
        .map(|_| [prng.gen_range(0..coarse), prng.gen_range(0..coarse)])
        .collect();
    const FIELDS: u64 = 50;
    let (power, smoothness) = (1.8f64, 1.3f64);
    env.insert("power".into(), power.to_string());
    env.insert("smoothness".into(), smoothness.to_string());

    let mut maxima = Vec::new();
    for m_pts in [fine / 2, fine] {
        let base = Grid::new(1, m_pts, l)?;
        let product = base.with_dim(2)?;
        if maxima.is_empty() {
            echo_grid(env, "coarse-grid", &base);
        } else {
            echo_grid(env, "fine-grid", &base);
        }
        let sigma_k = MultiplierSymbol::from_closed_form(2, 1, product, form.clone())?
            .with_support_hint(0.5, 2.0)?;
        let stride = m_pts / coarse;
        let sample_points: Vec<Vec<usize>> = coarse_indices
            .iter()
            .map(|c| vec![c[0] * stride, c[1] * stride])
            .collect();
        let mut worst = 0.0f64;
        for i in 0..FIELDS {
            let mut rng = seeded(cfg.seed.wrapping_add(i), "domination-fields");
            let f1 = trig_polynomial(base, &mut rng, 16, 7);
            let f2 = trig_polynomial(base, &mut rng, 16, 7);
            let report = pointwise_domination_check(
                &sigma_k,
                &[&f1, &f2],
                0,
                power,
                smoothness,
                &sample_points,
            )?;
            ensure!(
                report.max_ratio.is_finite(),
                "domination ratio diverged at M = {m_pts}, instance {i}"
            );
            worst = worst.max(report.max_ratio);
        }
        maxima.push(worst);
    }
    let drift = (maxima[1] / maxima[0] - 1.0).abs();
    Ok(vec![
        Metric::info("fields per resolution", FIELDS as f64),
        Metric::info("max ratio at half resolution", maxima[0]),
        Metric::floor("max ratio at full resolution", maxima[1], f64::MIN_POSITIVE),
        Metric::ceiling("refinement drift", drift, cfg.threshold("drift", 0.15)),
    ])
}

/// Transpose pairing identity in both slots on random instances.
pub(crate) fn transpose_check(cfg: &RunConfig, env: &mut Env) -> anyhow::Result<Vec<Metric>> {
    let base = Grid::new(1, cfg.grid_m.unwrap_or(32), cfg.half_width.unwrap_or(4.0))?;
    let product = base.with_dim(2)?;
    echo_grid(env, "grid", &base);
    const INSTANCES: u64 = 20;
    let mut slot_worst = [0.0f64; 2];
    for i in 0..INSTANCES {
        let mut rng = seeded(cfg.seed.wrapping_add(i), "transpose-pairing");
        let sigma = random_sampled_symbol(product, &mut rng, Some(0.7))?;
        let f1 = band_limited_field(base, 0.25, &mut rng)?;
        let f2 = band_limited_field(base, 0.25, &mut rng)?;
        let h = band_limited_field(base, 0.25, &mut rng)?;
        for j in 0..2usize {
            let transposed = transpose_symbol(&sigma, j)?;
            let lhs = apply(&transposed, &[&f1, &f2])?.output.pairing(&h)?;
            let swapped: [&Field; 2] = if j == 0 { [&h, &f2] } else { [&f1, &h] };
            let pivot = if j == 0 { &f1 } else { &f2 };
            let rhs = apply(&sigma, &swapped)?.output.pairing(pivot)?;
            let scale = lhs.norm().max(rhs.norm()).max(1e-30);
            slot_worst[j] = slot_worst[j].max((lhs - rhs).norm() / scale);
        }
    }
    let gap = cfg.threshold("gap", 1e-8);
    Ok(vec![
        Metric::info("instances", INSTANCES as f64),
        Metric::ceiling("max pairing gap, slot 1", slot_worst[0], gap),
        Metric::ceiling("max pairing gap, slot 2", slot_worst[1], gap),
    ])
}

fn monotonicity_violations(values: &[f64], strict: bool) -> f64 {
    values
        .windows(2)
        .filter(|w| if strict { w[1] <= w[0] } else { w[1] < w[0] })
        .count() as f64
}

/// Operator-norm growth sweep over truncation radii under a named preset.
pub(crate) fn sharpness_sweep(
    cfg: &RunConfig,
    env: &mut Env,
    dumps: &mut FieldDumps,
) -> anyhow::Result<Vec<Metric>> {
    let preset = cfg.preset.as_deref().unwrap_or("case1");
    let n_values: Vec<u32> = vec![16, 32, 64, 128, 256, 512, 1024];
    env.insert(
        "truncation-radii".into(),
        n_values
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join(" "),
    );

    let (params, metrics, curve) = match preset {
        "case1" => {
            let params = SharpnessParams::case1();
            let grid = Grid::new(2, cfg.grid_m.unwrap_or(2048), cfg.half_width.unwrap_or(256.0))?;
            echo_grid(env, "grid", &grid);
            let curve = growth_sweep(&params, &n_values, grid)?;
            let fitted = curve.growth_exponent(params.gamma)?;
            let target = params.mn() - params.t;
            let metrics = vec![
                Metric::ceiling(
                    "upper band ratio",
                    curve.upper_band_ratio(),
                    cfg.threshold("upper-band", 1.3),
                ),
                Metric::info("fitted growth exponent", fitted),
                Metric::ceiling(
                    "growth exponent gap",
                    (fitted - target).abs(),
                    cfg.threshold("exponent-gap", 0.03),
                ),
                Metric::ceiling(
                    "lower monotonicity violations",
                    monotonicity_violations(&curve.lower, false),
                    0.0,
                ),
            ];
            (params, metrics, curve)
        }
        "case2" => {
            let params = SharpnessParams::case2();
            let grid = Grid::new(2, cfg.grid_m.unwrap_or(2048), cfg.half_width.unwrap_or(256.0))?;
            echo_grid(env, "grid", &grid);
            let curve = growth_sweep(&params, &n_values, grid)?;
            let slope = curve.log_growth_slope()?;
            let metrics = vec![
                Metric::ceiling(
                    "upper band ratio",
                    curve.upper_band_ratio(),
                    cfg.threshold("upper-band", 1.3),
                ),
                Metric::floor("lower log slope", slope, cfg.threshold("slope", 0.005)),
                Metric::ceiling(
                    "lower strict monotonicity violations",
                    monotonicity_violations(&curve.lower, true),
                    0.0,
                ),
            ];
            (params, metrics, curve)
        }
        "control" => {
            // Integrable-tail control: the truncated mass saturates, so the
            // lower curve carries the whole verdict and the upper row is a
            // placeholder.
            let params = SharpnessParams::control();
            let lower: Vec<f64> = n_values
                .iter()
                .map(|&n| truncated_kernel_mass(params.t, params.gamma, n as f64))
                .collect();
            let curve = SweepCurve {
                n_values: n_values.clone(),
                upper: vec![1.0; n_values.len()],
                lower,
            };
            let metrics = vec![
                Metric::info("final truncated mass", *curve.lower.last().unwrap()),
                Metric::ceiling(
                    "saturation defect",
                    curve.saturation_defect()?,
                    cfg.threshold("saturation", 0.02),
                ),
                Metric::ceiling(
                    "lower monotonicity violations",
                    monotonicity_violations(&curve.lower, false),
                    0.0,
                ),
            ];
            (params, metrics, curve)
        }
        other => bail!("unknown preset '{other}'; expected case1, case2 or control"),
    };
    env.insert("preset".into(), preset.into());
    env.insert("s".into(), params.s.to_string());
    env.insert("r".into(), params.r.to_string());
    env.insert("q".into(), params.q.to_string());
    env.insert("t".into(), params.t.to_string());
    env.insert("gamma".into(), params.gamma.to_string());
    dumps.files.insert("sweep_curve.csv".into(), curve.to_csv());
    Ok(metrics)
}

/// Exponent-region membership against the independent polygon oracle, plus
/// constructive hull samples and the three archetype points.
pub(crate) fn region_check(cfg: &RunConfig, env: &mut Env) -> anyhow::Result<Vec<Metric>> {
    let (m, n, s) = (2usize, 1usize, 1.2f64);
    let threshold = s / (m as f64 * n as f64);
    env.insert("arity".into(), m.to_string());
    env.insert("dimension".into(), n.to_string());
    env.insert("smoothness".into(), s.to_string());
    env.insert("cube-side".into(), threshold.to_string());
    let vertices = hull_polygon_vertices(threshold)?;
    let band = cfg.threshold("boundary-band", 1e-9);

    const ORACLE_POINTS: u64 = 10_000;
    let mut rng = seeded(cfg.seed, "region-oracle");
    let mut disagreements = 0u64;
    let mut undecided = 0u64;
    for _ in 0..ORACLE_POINTS {
        let r1 = 1.2 * rng.gen::<f64>();
        let r2 = 1.2 * rng.gen::<f64>();
        let membership = ExponentRegion::new(m, n, s, vec![r1, r2])?.membership();
        match classify_against_polygon([r1, r2], &vertices, band) {
            Some(expected) => {
                if expected != membership.inside_hull {
                    disagreements += 1;
                }
            }
            None => undecided += 1,
        }
    }

    const HULL_SAMPLES: u64 = 2000;
    let mut hrng = seeded(cfg.seed, "region-hull-samples");
    let mut sample_violations = 0u64;
    for _ in 0..HULL_SAMPLES {
        let point = sample_hull_point(m, threshold, &mut hrng);
        if !ExponentRegion::new(m, n, s, point)?.membership().inside_hull {
            sample_violations += 1;
        }
    }

    // Archetypes: strictly inside the cube on the diagonal edge of the slab,
    // strictly inside the slab, and a clipped-corner point in neither.
    let mut archetype_mismatches = 0u64;
    let a = ExponentRegion::new(m, n, s, vec![0.5, 0.5])?.membership();
    if !(a.inside_q && a.inside_hull && !a.inside_p) {
        archetype_mismatches += 1;
    }
    let b = ExponentRegion::new(m, n, s, vec![0.3, 0.4])?.membership();
    if !b.inside_p {
        archetype_mismatches += 1;
    }
    let c = ExponentRegion::new(m, n, s, vec![0.9, 0.15])?.membership();
    if !(!c.inside_q && !c.inside_p && c.inside_hull) {
        archetype_mismatches += 1;
    }

    Ok(vec![
        Metric::info("oracle points", ORACLE_POINTS as f64),
        Metric::info("boundary-band points", undecided as f64),
        Metric::ceiling("hull disagreements", disagreements as f64, 0.0),
        Metric::info("constructive hull samples", HULL_SAMPLES as f64),
        Metric::ceiling("hull sample violations", sample_violations as f64, 0.0),
        Metric::ceiling("archetype mismatches", archetype_mismatches as f64, 0.0),
    ])
}
