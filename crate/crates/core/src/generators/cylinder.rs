//! The Lorentzian cylinder `ℝ × S¹` with circumference `L`, metric
//! `-dt² + dx²` and `x` identified modulo `L`.
//!
//! Time separation is the largest Minkowski separation over all lifts of the
//! target point to the universal cover.

use serde::{Deserialize, Serialize};

use crate::model::{Causality, ModelPoint};

/// Relative tolerance under which two windings count as tied maximizers.
pub const DEFAULT_TIE_TOLERANCE: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindingTau {
    pub winding: i64,
    pub tau: f64,
}

/// Minkowski separation of `q + (0, w·L)` from `p` for every winding `w` that
/// makes the pair timelike, ordered by winding.
pub fn cylinder_windings(circumference: f64, p: ModelPoint, q: ModelPoint) -> Vec<WindingTau> {
    assert!(circumference > 0.0, "circumference must be positive");
    let dt = q.time - p.time;
    if dt <= 0.0 {
        return Vec::new();
    }
    let dx = q.space - p.space;
    let lo = ((-dt - dx) / circumference).floor() as i64;
    let hi = ((dt - dx) / circumference).ceil() as i64;
    (lo..=hi)
        .filter_map(|w| {
            let shifted = dx + w as f64 * circumference;
            (dt > shifted.abs()).then(|| WindingTau {
                winding: w,
                tau: ((dt - shifted) * (dt + shifted)).sqrt(),
            })
        })
        .collect()
}

/// `τ(p, q)` on the cylinder, zero unless `q` is in the timelike future of `p`.
pub fn cylinder_tau(circumference: f64, p: ModelPoint, q: ModelPoint) -> f64 {
    cylinder_windings(circumference, p, q)
        .iter()
        .map(|w| w.tau)
        .fold(0.0, f64::max)
}

pub fn cylinder_relation(circumference: f64, p: ModelPoint, q: ModelPoint) -> Causality {
    let dt = q.time - p.time;
    let dx = circle_distance(circumference, q.space - p.space);
    if dt > dx {
        Causality::Timelike
    } else if dt > 0.0 && dt == dx {
        Causality::Null
    } else {
        Causality::Unrelated
    }
}

/// Windings whose separation is within relative tolerance `tol` of the
/// maximum, sorted by winding.
pub fn maximizing_windings(circumference: f64, p: ModelPoint, q: ModelPoint, tol: f64) -> Vec<WindingTau> {
    let all = cylinder_windings(circumference, p, q);
    let best = all.iter().map(|w| w.tau).fold(0.0, f64::max);
    all.into_iter().filter(|w| w.tau >= best * (1.0 - tol)).collect()
}

/// Number of (near-)maximizing geodesics from `p` to `q`.
pub fn geodesic_multiplicity(circumference: f64, p: ModelPoint, q: ModelPoint, tol: f64) -> usize {
    maximizing_windings(circumference, p, q, tol).len()
}

/// Point at parameter `s` on the straight segment from `p` to the lift of `q`
/// with the given winding. The space coordinate is left unreduced.
pub fn winding_geodesic(circumference: f64, p: ModelPoint, q: ModelPoint, winding: i64, s: f64) -> ModelPoint {
    let dx = q.space + winding as f64 * circumference - p.space;
    ModelPoint::new(p.time + s * (q.time - p.time), p.space + s * dx)
}

/// Reduces a space coordinate to `[0, L)`.
pub fn wrap_space(circumference: f64, x: f64) -> f64 {
    x.rem_euclid(circumference)
}

/// Distance on the circle between two points `dx` apart.
pub fn circle_distance(circumference: f64, dx: f64) -> f64 {
    let r = dx.rem_euclid(circumference);
    r.min(circumference - r)
}
