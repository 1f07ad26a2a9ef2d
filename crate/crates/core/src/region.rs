//! Exponent-region geometry: membership of a reciprocal-exponent tuple
//! `(1/p_1, …, 1/p_m)` in the open cube `Q_l = (0, l)^m`, the open slab
//! `P = {0 < Σ r_j < 1}`, and the convex hull of the two.
//!
//! Hull membership is decided on the closure with a small tolerance band;
//! the region's interesting corner points sit exactly on hull edges, so a
//! strict-interior test would be unstable there.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::{CoreError, Result};

/// Half-width of the band around the hull boundary inside which membership
/// calls are not trusted (and not compared against oracles).
pub const BOUNDARY_TOL: f64 = 1e-9;

/// A reciprocal-exponent tuple together with the smoothness data fixing the
/// cube size `l = s/(mn)`.
#[derive(Clone, Debug)]
pub struct ExponentRegion {
    m: usize,
    n: usize,
    s: f64,
    point: Vec<f64>,
}

/// Membership verdicts for one tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegionMembership {
    /// Strictly inside the open cube `(0, l)^m`.
    pub inside_q: bool,
    /// Strictly inside the open slab `0 < Σ r_j < 1`.
    pub inside_p: bool,
    /// In the closed convex hull of the cube and the standard simplex,
    /// up to [`BOUNDARY_TOL`].
    pub inside_hull: bool,
}

impl ExponentRegion {
    /// `point` holds `(1/p_1, …, 1/p_m)`; coordinates must be nonnegative.
    /// Arity is capped at 3, where the feasibility reduction is verified.
    pub fn new(m: usize, n: usize, s: f64, point: Vec<f64>) -> Result<Self> {
        if m == 0 || m > 3 {
            return Err(CoreError::InvalidParameter(format!(
                "arity must be 1..=3, got {m}"
            )));
        }
        if n == 0 {
            return Err(CoreError::InvalidParameter("dimension must be ≥ 1".into()));
        }
        if !(s > 0.0 && s.is_finite()) {
            return Err(CoreError::InvalidParameter(format!(
                "smoothness must be positive and finite, got {s}"
            )));
        }
        if point.len() != m {
            return Err(CoreError::Mismatch(format!(
                "point has {} coordinates, expected {m}",
                point.len()
            )));
        }
        if point.iter().any(|&r| !(r >= 0.0) || !r.is_finite()) {
            return Err(CoreError::InvalidParameter(
                "reciprocal exponents must be finite and ≥ 0".into(),
            ));
        }
        Ok(Self { m, n, s, point })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn point(&self) -> &[f64] {
        &self.point
    }

    /// Cube size `l = s/(mn)`.
    pub fn threshold(&self) -> f64 {
        self.s / (self.m * self.n) as f64
    }

    /// Classify the tuple against the cube, the slab, and their hull.
    pub fn membership(&self) -> RegionMembership {
        let l = self.threshold();
        let sum: f64 = self.point.iter().sum();
        RegionMembership {
            inside_q: self.point.iter().all(|&r| r > 0.0 && r < l),
            inside_p: sum > 0.0 && sum < 1.0,
            inside_hull: hull_feasibility(&self.point, l) <= 1.0 + BOUNDARY_TOL,
        }
    }
}

/// Minimum over `λ ∈ [0,1]` of `Σ_j max(r_j − λl, 0) + λ`.
///
/// The point lies in the closed hull of `[0,l]^m` and the standard simplex
/// `{b_j ≥ 0, Σ b_j ≤ 1}` exactly when this minimum is ≤ 1: writing the
/// point as `λa + (1−λ)b` and eliminating the optimal `a_j = min(l, r_j/λ)`
/// turns the simplex constraint `Σ b_j ≤ 1` into this expression.  It is
/// piecewise linear and convex in `λ`, so the minimum sits at an endpoint
/// or at a kink `λ = r_j/l`.
pub fn hull_feasibility(point: &[f64], l: f64) -> f64 {
    let h = |lambda: f64| -> f64 {
        point
            .iter()
            .map(|&r| (r - lambda * l).max(0.0))
            .sum::<f64>()
            + lambda
    };
    let mut best = h(0.0).min(h(1.0));
    for &r in point {
        let kink = (r / l).clamp(0.0, 1.0);
        best = best.min(h(kink));
    }
    best
}

/// Vertices (counterclockwise) of the two-dimensional hull for cube size
/// `0 < l < 1`: the simplex alone when `2l ≤ 1`, otherwise the
/// quadrilateral picking up the cube corner `(l, l)`.
///
/// Derived purely from extreme-point enumeration of `[0,l]² ∪ simplex`,
/// independently of [`hull_feasibility`], so the two can check each other.
pub fn hull_polygon_vertices(l: f64) -> Result<Vec<[f64; 2]>> {
    if !(l > 0.0 && l < 1.0) {
        return Err(CoreError::InvalidParameter(format!(
            "polygon route requires 0 < l < 1, got {l}"
        )));
    }
    if 2.0 * l <= 1.0 {
        Ok(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    } else {
        Ok(vec![[0.0, 0.0], [1.0, 0.0], [l, l], [0.0, 1.0]])
    }
}

/// Point-in-convex-polygon with a tolerance band: `Some(true)` inside,
/// `Some(false)` outside, `None` when the point is within `tol` of an edge
/// line (too close to call).
pub fn classify_against_polygon(point: [f64; 2], vertices: &[[f64; 2]], tol: f64) -> Option<bool> {
    let nv = vertices.len();
    let mut inside = true;
    let mut near_edge = false;
    for i in 0..nv {
        let a = vertices[i];
        let b = vertices[(i + 1) % nv];
        let cross = (b[0] - a[0]) * (point[1] - a[1]) - (b[1] - a[1]) * (point[0] - a[0]);
        let edge_len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
        let dist = cross / edge_len;
        if dist.abs() <= tol {
            near_edge = true;
        }
        if dist < 0.0 {
            inside = false;
        }
    }
    if near_edge {
        None
    } else {
        Some(inside)
    }
}

/// Draw a point of the closed hull by construction: `λa + (1−λ)b` with `a`
/// uniform in the cube and `b` rejection-sampled from the simplex.  Every
/// such point must classify as inside, which exercises the feasibility
/// reduction from the definition of convexity itself.
pub fn sample_hull_point(m: usize, l: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let lambda: f64 = rng.gen_range(0.0..=1.0);
    let a: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..=l)).collect();
    let b: Vec<f64> = loop {
        let cand: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..=1.0)).collect();
        if cand.iter().sum::<f64>() <= 1.0 {
            break cand;
        }
    };
    (0..m)
        .map(|j| lambda * a[j] + (1.0 - lambda) * b[j])
        .collect()
}
