//! Two-dimensional Lorentzian model spaces of constant curvature.
//!
//! Three charts are used, one per sign of the curvature `K`:
//!
//! - `K = 0`: the Minkowski plane, coordinates `(t, x)` in length units,
//!   metric `-dt² + dx²`.
//! - `K < 0`: anti-de Sitter in the conformal strip, coordinates `(η, ρ)` with
//!   `|ρ| < π/2`, metric `r² sec²ρ (-dη² + dρ²)` where `r = 1/√(-K)`. The
//!   strip is the universal cover, so `η` ranges over all of `ℝ`.
//! - `K > 0`: de Sitter in the conformal chart, coordinates `(η, θ)` with
//!   `|η| < π/2` and `θ` an angle, metric `r² sec²η (-dη² + dθ²)` where
//!   `r = 1/√K`.
//!
//! Time separations for `K ≠ 0` come from the embedding as a quadric in a
//! three-dimensional flat space with an indefinite inner product. They are
//! evaluated through half-angle products so that short and long separations
//! are both well conditioned.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Distance from `D_K` inside which separations are rejected instead of
/// evaluated.
pub const DIAMETER_GUARD: f64 = 1e-12;

/// Arguments of `arcosh` within this distance below 1 are clamped to 1.
pub const ARCOSH_SLOP: f64 = 1e-12;

/// Relative slack on `c ≥ a + b` before a side triple counts as violating the
/// reverse triangle inequality.
pub const REALIZABILITY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("point ({time}, {space}) lies outside the {chart} chart")]
    ChartDomain { chart: Chart, time: f64, space: f64 },
    #[error("points are not timelike related")]
    NotTimelikeRelated,
    #[error("separation reaches the model diameter {diameter}")]
    ExceedsModelDiameter { diameter: f64 },
    #[error("unrealizable triangle: {0}")]
    UnrealizableTriangle(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// A point in the active chart of a model space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelPoint {
    pub time: f64,
    pub space: f64,
}

impl ModelPoint {
    pub const ORIGIN: ModelPoint = ModelPoint { time: 0.0, space: 0.0 };

    pub fn new(time: f64, space: f64) -> Self {
        Self { time, space }
    }
}

impl fmt::Display for ModelPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.time, self.space)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Chart {
    /// Global Minkowski plane.
    Plane,
    /// Conformal strip of the universal cover of anti-de Sitter.
    AdsStrip,
    /// Conformal chart of de Sitter.
    DeSitterStrip,
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chart::Plane => "plane",
            Chart::AdsStrip => "ads-strip",
            Chart::DeSitterStrip => "desitter-strip",
        })
    }
}

/// How pairs beyond the focal cone are treated in anti-de Sitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdsDomain {
    /// Only pairs that fit in a common globally hyperbolic patch are valid;
    /// others are an [`ModelError::ExceedsModelDiameter`] error.
    #[default]
    GloballyHyperbolic,
    /// Pairs joined by unboundedly long causal curves get `τ = +∞`.
    Full,
}

/// Causal relation of `q` as seen from `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Causality {
    Timelike,
    Null,
    Unrelated,
}

impl Causality {
    pub fn is_causal(self) -> bool {
        !matches!(self, Causality::Unrelated)
    }
}

/// Which vertex of a timelike triangle `x ≪ y ≪ z` an angle is measured at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VertexRole {
    Past,
    Middle,
    Future,
}

impl VertexRole {
    /// Sign of the Lorentzian inner product of the two unit tangents at the
    /// vertex: negative at the past and future vertices, positive in the
    /// middle.
    pub fn sign(self) -> f64 {
        match self {
            VertexRole::Middle => 1.0,
            VertexRole::Past | VertexRole::Future => -1.0,
        }
    }
}

/// Relative time orientation of the two legs of a hinge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HingeOrientation {
    /// Both legs future directed, or both past directed.
    Same,
    /// One leg past directed and the other future directed.
    Mixed,
}

impl HingeOrientation {
    pub fn sign(self) -> f64 {
        match self {
            HingeOrientation::Same => -1.0,
            HingeOrientation::Mixed => 1.0,
        }
    }
}

/// Side lengths of a timelike triangle `x ≪ y ≪ z`:
/// `a = τ(x,y)`, `b = τ(y,z)`, `c = τ(x,z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleSides {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl TriangleSides {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    pub fn perimeter(&self) -> f64 {
        self.a + self.b + self.c
    }

    /// `c - (a + b)`, non-negative for triangles obeying the reverse triangle
    /// inequality.
    pub fn deficit(&self) -> f64 {
        self.c - (self.a + self.b)
    }
}

/// Two legs from a common vertex with lengths, angle and orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HingeData {
    pub curvature: f64,
    pub first: f64,
    pub second: f64,
    pub angle: f64,
    pub orientation: HingeOrientation,
}

/// Finite diameter of the model space of curvature `k`.
pub fn finite_diameter_constant(k: f64) -> f64 {
    if k < 0.0 {
        PI / (-k).sqrt()
    } else {
        f64::INFINITY
    }
}

/// `arcosh(1 + e)` for `e ≥ 0` without the cancellation of `acosh` near 1.
fn arcosh_one_plus(e: f64) -> f64 {
    let e = e.max(0.0);
    (e + (e * (e + 2.0)).sqrt()).ln_1p()
}

/// `cosh(ω) - 1`.
fn cosh_excess(angle: f64) -> f64 {
    let h = (0.5 * angle).sinh();
    2.0 * h * h
}

fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Moves `value` by a multiple of `2π` so it lies as close as possible to
/// `target`.
fn unwrap_near(value: f64, target: f64) -> f64 {
    value + 2.0 * PI * ((target - value) / (2.0 * PI)).round()
}

/// Constant-curvature Lorentzian surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpace {
    curvature: f64,
    #[serde(default)]
    ads_domain: AdsDomain,
}

impl ModelSpace {
    pub fn new(curvature: f64) -> Self {
        assert!(curvature.is_finite(), "curvature must be finite");
        Self {
            curvature,
            ads_domain: AdsDomain::GloballyHyperbolic,
        }
    }

    pub fn minkowski() -> Self {
        Self::new(0.0)
    }

    /// Anti-de Sitter that reports `τ = +∞` instead of erroring on pairs
    /// without a maximizing geodesic. Identical to [`ModelSpace::new`] for
    /// `K ≥ 0`.
    pub fn with_ads_domain(mut self, domain: AdsDomain) -> Self {
        self.ads_domain = domain;
        self
    }

    pub fn curvature(&self) -> f64 {
        self.curvature
    }

    pub fn ads_domain(&self) -> AdsDomain {
        self.ads_domain
    }

    pub fn chart(&self) -> Chart {
        if self.curvature < 0.0 {
            Chart::AdsStrip
        } else if self.curvature > 0.0 {
            Chart::DeSitterStrip
        } else {
            Chart::Plane
        }
    }

    /// `D_K`.
    pub fn diameter(&self) -> f64 {
        finite_diameter_constant(self.curvature)
    }

    /// Curvature radius `1/√|K|`, `None` for the flat plane.
    pub fn radius(&self) -> Option<f64> {
        if self.curvature == 0.0 {
            None
        } else {
            Some(1.0 / self.curvature.abs().sqrt())
        }
    }

    pub fn check_domain(&self, p: ModelPoint) -> Result<(), ModelError> {
        let ok = p.time.is_finite()
            && p.space.is_finite()
            && match self.chart() {
                Chart::Plane => true,
                Chart::AdsStrip => p.space.abs() < FRAC_PI_2,
                Chart::DeSitterStrip => p.time.abs() < FRAC_PI_2,
            };
        if ok {
            Ok(())
        } else {
            Err(ModelError::ChartDomain {
                chart: self.chart(),
                time: p.time,
                space: p.space,
            })
        }
    }

    /// Coordinate separation `(Δtime, Δspace)` with the de Sitter angle
    /// reduced to `[-π, π]`.
    fn deltas(&self, p: ModelPoint, q: ModelPoint) -> (f64, f64) {
        let dt = q.time - p.time;
        let dx = q.space - p.space;
        match self.chart() {
            Chart::DeSitterStrip => (dt, wrap_angle(dx)),
            _ => (dt, dx),
        }
    }

    /// Causal relation of `q` relative to `p` (future directed).
    pub fn relation(&self, p: ModelPoint, q: ModelPoint) -> Result<Causality, ModelError> {
        self.check_domain(p)?;
        self.check_domain(q)?;
        let (dt, dx) = self.deltas(p, q);
        Ok(if dt > dx.abs() {
            Causality::Timelike
        } else if dt > 0.0 && dt == dx.abs() {
            Causality::Null
        } else {
            Causality::Unrelated
        })
    }

    /// Time separation `τ(p, q)`: zero unless `q` lies in the timelike future
    /// of `p`.
    pub fn tau(&self, p: ModelPoint, q: ModelPoint) -> Result<f64, ModelError> {
        self.check_domain(p)?;
        self.check_domain(q)?;
        let (dt, dx) = self.deltas(p, q);
        if dt <= dx.abs() {
            return Ok(0.0);
        }
        match self.chart() {
            Chart::Plane => Ok(((dt - dx) * (dt + dx)).sqrt()),
            Chart::AdsStrip => {
                let r = self.radius().unwrap();
                let denom = p.space.cos() * q.space.cos();
                // sin²(τ/2r) and cos²(τ/2r) as products of half-angle sines.
                let s2 = (0.5 * (dt + dx)).sin() * (0.5 * (dt - dx)).sin() / denom;
                let sum = p.space + q.space;
                let c2 = (0.5 * (dt + sum)).cos() * (0.5 * (dt - sum)).cos() / denom;
                let beyond = dt + sum.abs() >= PI;
                if beyond || c2 <= 0.0 {
                    return match self.ads_domain {
                        AdsDomain::Full if dt + sum.abs() > PI => Ok(f64::INFINITY),
                        AdsDomain::Full => Ok(PI * r),
                        AdsDomain::GloballyHyperbolic => Err(ModelError::ExceedsModelDiameter {
                            diameter: self.diameter(),
                        }),
                    };
                }
                let tau = 2.0 * r * s2.max(0.0).sqrt().atan2(c2.sqrt());
                if self.ads_domain == AdsDomain::GloballyHyperbolic && tau >= self.diameter() - DIAMETER_GUARD {
                    return Err(ModelError::ExceedsModelDiameter {
                        diameter: self.diameter(),
                    });
                }
                Ok(tau)
            }
            Chart::DeSitterStrip => {
                let r = self.radius().unwrap();
                let denom = p.time.cos() * q.time.cos();
                let s2 = (0.5 * (dt + dx)).sin() * (0.5 * (dt - dx)).sin() / denom;
                Ok(2.0 * r * s2.max(0.0).sqrt().asinh())
            }
        }
    }

    /// Constant-speed timelike geodesic from `p` to `q`, evaluated at
    /// parameter `s ∈ [0, 1]`.
    pub fn geodesic(&self, p: ModelPoint, q: ModelPoint, s: f64) -> Result<ModelPoint, ModelError> {
        if !(0.0..=1.0).contains(&s) {
            return Err(ModelError::InvalidParameter(format!(
                "geodesic parameter {s} outside [0, 1]"
            )));
        }
        let tau = self.tau(p, q)?;
        if tau <= 0.0 {
            return Err(ModelError::NotTimelikeRelated);
        }
        if tau >= self.diameter() - DIAMETER_GUARD {
            return Err(ModelError::ExceedsModelDiameter {
                diameter: self.diameter(),
            });
        }
        if s == 0.0 {
            return Ok(p);
        }
        if s == 1.0 {
            return Ok(q);
        }
        let (dt, dx) = self.deltas(p, q);
        let guess = ModelPoint::new(p.time + s * dt, p.space + s * dx);
        match self.chart() {
            Chart::Plane => Ok(guess),
            Chart::AdsStrip => {
                let big_t = tau / self.radius().unwrap();
                let a = ads_embed(p);
                let b = ads_embed(q);
                let (wa, wb) = (((1.0 - s) * big_t).sin(), (s * big_t).sin());
                let norm = big_t.sin();
                let e = [
                    (wa * a[0] + wb * b[0]) / norm,
                    (wa * a[1] + wb * b[1]) / norm,
                    (wa * a[2] + wb * b[2]) / norm,
                ];
                let space = e[2].atan();
                let time = unwrap_near(e[1].atan2(e[0]), guess.time);
                Ok(ModelPoint::new(time, space))
            }
            Chart::DeSitterStrip => {
                let big_t = tau / self.radius().unwrap();
                let a = ds_embed(p);
                let b = ds_embed(q);
                let (wa, wb) = (((1.0 - s) * big_t).sinh(), (s * big_t).sinh());
                let norm = big_t.sinh();
                let e = [
                    (wa * a[0] + wb * b[0]) / norm,
                    (wa * a[1] + wb * b[1]) / norm,
                    (wa * a[2] + wb * b[2]) / norm,
                ];
                let time = e[0].atan();
                let space = unwrap_near(e[2].atan2(e[1]), guess.space);
                Ok(ModelPoint::new(time, space))
            }
        }
    }

    /// Volume element of the chart at `p`, relative to `dt dx`.
    pub fn volume_density(&self, p: ModelPoint) -> f64 {
        match self.chart() {
            Chart::Plane => 1.0,
            Chart::AdsStrip => {
                let r = self.radius().unwrap();
                r * r / p.space.cos().powi(2)
            }
            Chart::DeSitterStrip => {
                let r = self.radius().unwrap();
                r * r / p.time.cos().powi(2)
            }
        }
    }

    /// Curvature-scaled length `√|K|·ℓ`, or `ℓ` itself for `K = 0`.
    fn scaled(&self, len: f64) -> f64 {
        if self.curvature == 0.0 {
            len
        } else {
            len * self.curvature.abs().sqrt()
        }
    }

    /// `cosh(ω) - 1` for the comparison angle at `vertex`, where `ω` is the
    /// hyperbolic angle between the two sides meeting there.
    fn angle_excess(&self, sides: TriangleSides, vertex: VertexRole) -> Result<f64, ModelError> {
        let TriangleSides { a, b, c } = sides;
        if !(a > 0.0 && b > 0.0 && c > 0.0) || !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(ModelError::UnrealizableTriangle(format!(
                "side lengths must be positive and finite, got ({a}, {b}, {c})"
            )));
        }
        if c >= self.diameter() - DIAMETER_GUARD {
            return Err(ModelError::UnrealizableTriangle(format!(
                "longest side {c} violates the size bound {}",
                self.diameter()
            )));
        }
        let deficit = c - a - b;
        if deficit < -REALIZABILITY_SLACK * c {
            return Err(ModelError::UnrealizableTriangle(format!(
                "reverse triangle inequality fails: {c} < {a} + {b}"
            )));
        }
        let deficit = self.scaled(deficit.max(0.0));
        let (sa, sb, sc) = (self.scaled(a), self.scaled(b), self.scaled(c));
        let k = self.curvature;
        // Each branch writes cosh(ω) - 1 as a product that vanishes linearly in
        // the deficit, so degenerate triangles give exactly zero.
        let e = match vertex {
            VertexRole::Past | VertexRole::Future => {
                // `near` is the side adjacent to the vertex other than c,
                // `far` the opposite side.
                let (near, far) = match vertex {
                    VertexRole::Past => (sa, sb),
                    _ => (sb, sa),
                };
                if k == 0.0 {
                    deficit * (sc - near + far) / (2.0 * near * sc)
                } else if k < 0.0 {
                    2.0 * (0.5 * (far + sc - near)).sin() * (0.5 * deficit).sin() / (near.sin() * sc.sin())
                } else {
                    2.0 * (0.5 * (sc - near + far)).sinh() * (0.5 * deficit).sinh() / (near.sinh() * sc.sinh())
                }
            }
            VertexRole::Middle => {
                if k == 0.0 {
                    deficit * (sc + sa + sb) / (2.0 * sa * sb)
                } else if k < 0.0 {
                    2.0 * (0.5 * (sc + sa + sb)).sin() * (0.5 * deficit).sin() / (sa.sin() * sb.sin())
                } else {
                    2.0 * (0.5 * (sc + sa + sb)).sinh() * (0.5 * deficit).sinh() / (sa.sinh() * sb.sinh())
                }
            }
        };
        Ok(if e < 0.0 && e > -ARCOSH_SLOP { 0.0 } else { e.max(0.0) })
    }

    /// Unsigned comparison angle at `vertex` of the comparison triangle with
    /// the given side lengths.
    pub fn comparison_angle(&self, sides: TriangleSides, vertex: VertexRole) -> Result<f64, ModelError> {
        Ok(arcosh_one_plus(self.angle_excess(sides, vertex)?))
    }

    /// Comparison angle multiplied by the sign of its inner product.
    pub fn signed_comparison_angle(&self, sides: TriangleSides, vertex: VertexRole) -> Result<f64, ModelError> {
        Ok(vertex.sign() * self.comparison_angle(sides, vertex)?)
    }

    /// Length of the side opposite a hinge with legs `first`, `second` and
    /// angle `angle`. Returns zero when the two far endpoints are not
    /// timelike related.
    pub fn law_of_cosines(
        &self,
        first: f64,
        second: f64,
        angle: f64,
        orientation: HingeOrientation,
    ) -> Result<f64, ModelError> {
        let d = self.diameter();
        for len in [first, second] {
            if !(len >= 0.0) || !len.is_finite() {
                return Err(ModelError::InvalidParameter(format!("hinge leg length {len}")));
            }
            if len >= d - DIAMETER_GUARD {
                return Err(ModelError::ExceedsModelDiameter { diameter: d });
            }
        }
        if !(angle >= 0.0) || !angle.is_finite() {
            return Err(ModelError::InvalidParameter(format!("hinge angle {angle}")));
        }
        let e = cosh_excess(angle);
        let (m, t) = (self.scaled(first), self.scaled(second));
        let k = self.curvature;
        let tau_scaled = match orientation {
            HingeOrientation::Same => {
                let s2 = if k == 0.0 {
                    (m - t).powi(2) - 2.0 * m * t * e
                } else if k < 0.0 {
                    (0.5 * (m - t)).sin().powi(2) - 0.5 * m.sin() * t.sin() * e
                } else {
                    (0.5 * (m - t)).sinh().powi(2) - 0.5 * m.sinh() * t.sinh() * e
                };
                if s2 <= 0.0 {
                    0.0
                } else if k == 0.0 {
                    s2.sqrt()
                } else if k < 0.0 {
                    2.0 * s2.sqrt().min(1.0).asin()
                } else {
                    2.0 * s2.sqrt().asinh()
                }
            }
            HingeOrientation::Mixed => {
                if k == 0.0 {
                    ((m + t).powi(2) + 2.0 * m * t * e).sqrt()
                } else if k < 0.0 {
                    let half = 0.5 * m.sin() * t.sin() * e;
                    let s2 = (0.5 * (m + t)).sin().powi(2) + half;
                    let c2 = (0.5 * (m + t)).cos().powi(2) - half;
                    if c2 <= 0.0 {
                        return Err(ModelError::ExceedsModelDiameter { diameter: d });
                    }
                    2.0 * s2.sqrt().atan2(c2.sqrt())
                } else {
                    let s2 = (0.5 * (m + t)).sinh().powi(2) + 0.5 * m.sinh() * t.sinh() * e;
                    2.0 * s2.sqrt().asinh()
                }
            }
        };
        let tau = if k == 0.0 {
            tau_scaled
        } else {
            tau_scaled / k.abs().sqrt()
        };
        if tau >= d - DIAMETER_GUARD {
            return Err(ModelError::ExceedsModelDiameter { diameter: d });
        }
        Ok(tau)
    }

    pub fn hinge_opposite_side(&self, hinge: &HingeData) -> Result<f64, ModelError> {
        self.law_of_cosines(hinge.first, hinge.second, hinge.angle, hinge.orientation)
    }

    /// Point at proper time `len` along the future-directed geodesic leaving
    /// the chart origin with rapidity `angle` (positive angles move towards
    /// positive space coordinate).
    pub fn point_from_origin(&self, len: f64, angle: f64) -> Result<ModelPoint, ModelError> {
        if len >= self.diameter() - DIAMETER_GUARD {
            return Err(ModelError::ExceedsModelDiameter {
                diameter: self.diameter(),
            });
        }
        let (ch, sh) = (angle.cosh(), angle.sinh());
        let l = self.scaled(len);
        Ok(match self.chart() {
            Chart::Plane => ModelPoint::new(len * ch, len * sh),
            Chart::AdsStrip => {
                let (c, s) = (l.cos(), l.sin());
                // Embedding point cos(l)·(1,0,0) + sin(l)·(0, cosh, sinh).
                ModelPoint::new((s * ch).atan2(c), (s * sh).atan())
            }
            Chart::DeSitterStrip => {
                let (c, s) = (l.cosh(), l.sinh());
                // Embedding point cosh(l)·(0,1,0) + sinh(l)·(cosh, 0, sinh).
                ModelPoint::new((s * ch).atan(), (s * sh).atan2(c))
            }
        })
    }

    /// Point on the time axis through the origin at signed proper time `len`.
    pub fn point_on_axis(&self, len: f64) -> Result<ModelPoint, ModelError> {
        if len >= 0.0 {
            self.point_from_origin(len, 0.0)
        } else {
            let p = self.point_from_origin(-len, 0.0)?;
            Ok(ModelPoint::new(-p.time, p.space))
        }
    }

    /// Background coordinate distance used for reporting.
    pub fn chart_distance(&self, p: ModelPoint, q: ModelPoint) -> f64 {
        let (dt, dx) = self.deltas(p, q);
        dt.hypot(dx)
    }
}

/// Unit-radius embedding of an anti-de Sitter chart point as `(U, V, X)` with
/// `-U² - V² + X² = -1`.
fn ads_embed(p: ModelPoint) -> [f64; 3] {
    let c = p.space.cos();
    [p.time.cos() / c, p.time.sin() / c, p.space.tan()]
}

/// Unit-radius embedding of a de Sitter chart point as `(T, X, Y)` with
/// `-T² + X² + Y² = 1`.
fn ds_embed(p: ModelPoint) -> [f64; 3] {
    let c = p.time.cos();
    [p.time.tan(), p.space.cos() / c, p.space.sin() / c]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn flat_tau_examples() {
        let m = ModelSpace::minkowski();
        assert_eq!(m.tau(ModelPoint::ORIGIN, ModelPoint::new(5.0, 3.0)).unwrap(), 4.0);
        assert_eq!(m.tau(ModelPoint::ORIGIN, ModelPoint::new(1.0, 2.0)).unwrap(), 0.0);
        // Past-directed pairs have zero separation.
        assert_eq!(m.tau(ModelPoint::new(5.0, 3.0), ModelPoint::ORIGIN).unwrap(), 0.0);
    }

    #[test]
    fn diameter_constants() {
        assert_eq!(finite_diameter_constant(-1.0), PI);
        assert_eq!(finite_diameter_constant(0.0), f64::INFINITY);
        assert_eq!(finite_diameter_constant(2.0), f64::INFINITY);
        assert_eq!(finite_diameter_constant(-4.0), PI / 2.0);
    }

    #[test]
    fn ads_additive_along_axis() {
        let ads = ModelSpace::new(-1.0);
        let p = ads.point_on_axis(0.0).unwrap();
        let q = ads.point_on_axis(0.4).unwrap();
        let r = ads.point_on_axis(0.9).unwrap();
        assert_relative_eq!(ads.tau(p, q).unwrap(), 0.4, epsilon = 1e-14);
        assert_relative_eq!(ads.tau(q, r).unwrap(), 0.5, epsilon = 1e-14);
        assert_relative_eq!(ads.tau(p, r).unwrap(), 0.9, epsilon = 1e-14);
    }

    #[test]
    fn ads_beyond_focal_cone() {
        let ads = ModelSpace::new(-1.0);
        let p = ModelPoint::new(0.0, 1.2);
        let q = ModelPoint::new(1.0, 1.25);
        // Δη + |ρ + ρ'| > π: no maximizing geodesic.
        assert!(matches!(ads.tau(p, q), Err(ModelError::ExceedsModelDiameter { .. })));
        let full = ads.with_ads_domain(AdsDomain::Full);
        assert_eq!(full.tau(p, q).unwrap(), f64::INFINITY);
        assert!(matches!(
            ads.tau(p, ModelPoint::new(0.0, 1.6)),
            Err(ModelError::ChartDomain { .. })
        ));
    }

    #[test]
    fn geodesic_endpoints_and_midpoint() {
        let m = ModelSpace::minkowski();
        let mid = m.geodesic(ModelPoint::ORIGIN, ModelPoint::new(2.0, 0.0), 0.5).unwrap();
        assert_eq!(mid, ModelPoint::new(1.0, 0.0));
        for k in [-1.0, 0.0, 1.0] {
            let ms = ModelSpace::new(k);
            let p = ModelPoint::new(-0.3, 0.1);
            let q = ModelPoint::new(0.5, 0.3);
            assert_eq!(ms.geodesic(p, q, 0.0).unwrap(), p);
            assert_eq!(ms.geodesic(p, q, 1.0).unwrap(), q);
        }
        let ads = ModelSpace::new(-1.0);
        let p = ads.point_from_origin(0.2, 0.3).unwrap();
        let q = ads.point_from_origin(1.2, 0.3).unwrap();
        let total = ads.tau(p, q).unwrap();
        assert_relative_eq!(total, 1.0, epsilon = 1e-12);
        let mid = ads.geodesic(p, q, 0.5).unwrap();
        assert_relative_eq!(ads.tau(p, mid).unwrap(), 0.5, epsilon = 1e-12);
        assert_relative_eq!(ads.tau(mid, q).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn geodesic_rejects_spacelike() {
        let m = ModelSpace::minkowski();
        assert_eq!(
            m.geodesic(ModelPoint::ORIGIN, ModelPoint::new(1.0, 2.0), 0.5),
            Err(ModelError::NotTimelikeRelated)
        );
    }

    #[test]
    fn law_of_cosines_collinear() {
        let ads = ModelSpace::new(-1.0);
        // Legs on opposite sides of the vertex add up.
        let mixed = ads.law_of_cosines(0.4, 0.5, 0.0, HingeOrientation::Mixed).unwrap();
        assert_relative_eq!(mixed, 0.9, epsilon = 1e-14);
        // Legs on the same side overlap.
        let same = ads.law_of_cosines(0.4, 0.5, 0.0, HingeOrientation::Same).unwrap();
        assert_relative_eq!(same, 0.1, epsilon = 1e-14);
    }

    #[test]
    fn law_of_cosines_flat_hinge() {
        let flat = ModelSpace::minkowski();
        let w = 1.25f64.acosh();
        // Explicit realization: legs (1,0) and (cosh w, sinh w) = (1.25, 0.75).
        let leg_future = ModelPoint::new(1.25, 0.75);
        let mixed = flat.law_of_cosines(1.0, 1.0, w, HingeOrientation::Mixed).unwrap();
        let measured = flat.tau(ModelPoint::new(-1.0, 0.0), leg_future).unwrap();
        assert_relative_eq!(mixed, measured, epsilon = 1e-14);
        assert_relative_eq!(mixed, 4.5f64.sqrt(), epsilon = 1e-14);
        let same = flat.law_of_cosines(1.0, 1.0, w, HingeOrientation::Same).unwrap();
        assert_eq!(same, 0.0);
        assert_eq!(flat.tau(ModelPoint::new(1.0, 0.0), leg_future).unwrap(), 0.0);
    }

    #[test]
    fn law_of_cosines_beyond_diameter() {
        let ads = ModelSpace::new(-1.0);
        assert!(matches!(
            ads.law_of_cosines(1.8, 1.8, 0.5, HingeOrientation::Mixed),
            Err(ModelError::ExceedsModelDiameter { .. })
        ));
        assert!(matches!(
            ads.law_of_cosines(PI, 0.1, 0.5, HingeOrientation::Mixed),
            Err(ModelError::ExceedsModelDiameter { .. })
        ));
    }

    #[test]
    fn flat_comparison_angle_example() {
        let flat = ModelSpace::minkowski();
        let x = ModelPoint::ORIGIN;
        let y = ModelPoint::new(1.0, 0.0);
        let z = ModelPoint::new(3.0, 1.0);
        let sides = TriangleSides::new(
            flat.tau(x, y).unwrap(),
            flat.tau(y, z).unwrap(),
            flat.tau(x, z).unwrap(),
        );
        // Oracle: unit tangents (1,0) and (3,1)/√8, inner product -3/√8.
        let oracle = (3.0 / 8f64.sqrt()).acosh();
        let angle = flat.comparison_angle(sides, VertexRole::Past).unwrap();
        assert_relative_eq!(angle, oracle, epsilon = 1e-14);
        assert_relative_eq!(angle, 0.3466, epsilon = 1e-4);
    }

    #[test]
    fn degenerate_angles_vanish() {
        for k in [-1.0, 0.0, 1.0] {
            let ms = ModelSpace::new(k);
            let sides = TriangleSides::new(0.7, 1.1, 1.8);
            for role in [VertexRole::Past, VertexRole::Middle, VertexRole::Future] {
                assert_eq!(ms.comparison_angle(sides, role).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn signs_by_vertex() {
        assert_eq!(VertexRole::Past.sign(), -1.0);
        assert_eq!(VertexRole::Future.sign(), -1.0);
        assert_eq!(VertexRole::Middle.sign(), 1.0);
        let flat = ModelSpace::minkowski();
        let sides = TriangleSides::new(1.0, 1.0, 2.5);
        assert!(flat.signed_comparison_angle(sides, VertexRole::Past).unwrap() < 0.0);
        assert!(flat.signed_comparison_angle(sides, VertexRole::Middle).unwrap() > 0.0);
    }

    #[test]
    fn unrealizable_triples() {
        let ads = ModelSpace::new(-1.0);
        assert!(matches!(
            ads.comparison_angle(TriangleSides::new(1.0, 1.0, 1.5), VertexRole::Past),
            Err(ModelError::UnrealizableTriangle(_))
        ));
        assert!(matches!(
            ads.comparison_angle(TriangleSides::new(1.0, 1.0, 3.2), VertexRole::Past),
            Err(ModelError::UnrealizableTriangle(_))
        ));
        assert!(matches!(
            ads.comparison_angle(TriangleSides::new(0.0, 1.0, 3.0), VertexRole::Past),
            Err(ModelError::UnrealizableTriangle(_))
        ));
    }

    #[test]
    fn desitter_wraps_angle() {
        let ds = ModelSpace::new(1.0);
        let p = ModelPoint::new(-0.5, 3.0);
        let q = ModelPoint::new(0.5, -3.0);
        // Angular separation 2π - 6 ≈ 0.283 < Δη = 1.
        assert!(ds.tau(p, q).unwrap() > 0.0);
        let mid = ds.geodesic(p, q, 0.5).unwrap();
        assert_relative_eq!(ds.tau(p, mid).unwrap(), 0.5 * ds.tau(p, q).unwrap(), epsilon = 1e-12);
    }
}
