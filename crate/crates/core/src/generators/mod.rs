//! Construction of finite spaces: Poisson sprinkling into model-space
//! regions and the Lorentzian cylinder, plus small hand-built fixtures.

pub mod cylinder;
mod fixtures;

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{AdsDomain, ModelError, ModelPoint, ModelSpace};
use crate::space::{Ambient, DiscreteSpace, IntrinsicMode, SpaceError};

pub use cylinder::{cylinder_tau, cylinder_windings, WindingTau};
pub use fixtures::{
    bonnet_hinge_sides, bonnet_t, fixture, Fixture, BONNET_EPSILON, BONNET_M, BONNET_OMEGA, CYLINDER_SEGMENTS,
    FIXTURE_NAMES,
};

/// Default cap on the number of sprinkled points.
pub const DEFAULT_MAX_POINTS: usize = 200_000;

const SIMPSON_INTERVALS: usize = 4096;

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("sprinkling region is empty")]
    RegionEmpty,
    #[error("sprinkle would produce {requested} points, above the cap of {cap}")]
    DensityOverflow { requested: f64, cap: usize },
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("invalid sprinkle parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown fixture '{0}'")]
    UnknownFixture(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Region of a chart, in chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "shape")]
pub enum Region {
    /// Chart causal diamond between two timelike related corners.
    Diamond { bottom: ModelPoint, top: ModelPoint },
    /// Coordinate rectangle.
    Rect { t0: f64, t1: f64, x0: f64, x1: f64 },
}

impl Region {
    pub fn diamond(bottom: (f64, f64), top: (f64, f64)) -> Self {
        Region::Diamond {
            bottom: ModelPoint::new(bottom.0, bottom.1),
            top: ModelPoint::new(top.0, top.1),
        }
    }

    /// Bounding box `(t0, t1, x0, x1)`.
    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        match *self {
            Region::Diamond { bottom, top } => {
                let (u0, v0) = null_coords(bottom);
                let (u1, v1) = null_coords(top);
                (bottom.time, top.time, 0.5 * (v0 - u1), 0.5 * (v1 - u0))
            }
            Region::Rect { t0, t1, x0, x1 } => (t0, t1, x0, x1),
        }
    }

    pub fn contains(&self, p: ModelPoint) -> bool {
        match *self {
            Region::Diamond { bottom, top } => {
                let (u0, v0) = null_coords(bottom);
                let (u1, v1) = null_coords(top);
                let (u, v) = null_coords(p);
                u0 < u && u < u1 && v0 < v && v < v1
            }
            Region::Rect { t0, t1, x0, x1 } => t0 <= p.time && p.time <= t1 && x0 <= p.space && p.space <= x1,
        }
    }

    fn is_empty(&self) -> bool {
        let (t0, t1, x0, x1) = self.bounds();
        match self {
            Region::Diamond { bottom, top } => {
                let (dt, dx) = (top.time - bottom.time, top.space - bottom.space);
                !(dt > dx.abs())
            }
            Region::Rect { .. } => !(t1 > t0 && x1 > x0),
        }
    }

    /// Extent along time at fixed space coordinate.
    fn time_extent(&self, x: f64) -> f64 {
        match *self {
            Region::Diamond { bottom, top } => {
                let (u0, v0) = null_coords(bottom);
                let (u1, v1) = null_coords(top);
                ((u1 + x).min(v1 - x) - (u0 + x).max(v0 - x)).max(0.0)
            }
            Region::Rect { t0, t1, x0, x1 } => {
                if x0 <= x && x <= x1 {
                    t1 - t0
                } else {
                    0.0
                }
            }
        }
    }

    /// Extent along space at fixed time coordinate.
    fn space_extent(&self, t: f64) -> f64 {
        match *self {
            Region::Diamond { bottom, top } => {
                let (u0, v0) = null_coords(bottom);
                let (u1, v1) = null_coords(top);
                ((t - u0).min(v1 - t) - (t - u1).max(v0 - t)).max(0.0)
            }
            Region::Rect { t0, t1, x0, x1 } => {
                if t0 <= t && t <= t1 {
                    x1 - x0
                } else {
                    0.0
                }
            }
        }
    }
}

fn null_coords(p: ModelPoint) -> (f64, f64) {
    (p.time - p.space, p.time + p.space)
}

fn simpson(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let n = SIMPSON_INTERVALS;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Amount {
    Count(usize),
    /// Expected points per unit volume; the count is Poisson distributed.
    Density(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TauMode {
    #[default]
    Inherited,
    IntrinsicWeighted,
    IntrinsicLink,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SprinkleSpec {
    pub ambient: Ambient,
    pub region: Region,
    pub amount: Amount,
    pub seed: u64,
    pub tau_mode: TauMode,
    pub max_points: usize,
}

impl SprinkleSpec {
    pub fn new(ambient: Ambient, region: Region, amount: Amount, seed: u64) -> Self {
        Self {
            ambient,
            region,
            amount,
            seed,
            tau_mode: TauMode::Inherited,
            max_points: DEFAULT_MAX_POINTS,
        }
    }

    /// Default region for each ambient kind.
    pub fn default_region(ambient: &Ambient) -> Region {
        match ambient {
            Ambient::Cylinder { circumference } => Region::Rect {
                t0: 0.0,
                t1: 6.0,
                x0: 0.0,
                x1: *circumference,
            },
            Ambient::Model { space } if space.curvature() < 0.0 => Region::diamond((-1.5, 0.0), (1.5, 0.0)),
            Ambient::Model { space } if space.curvature() > 0.0 => Region::diamond((-1.2, 0.0), (1.2, 0.0)),
            Ambient::Model { .. } => Region::diamond((0.0, 0.0), (4.0, 0.0)),
        }
    }
}

/// Checks that the region lies in the chart and, for anti-de Sitter, that no
/// two of its points are separated past the focal cone.
pub fn validate_region(ambient: &Ambient, region: &Region) -> Result<(), GeneratorError> {
    if region.is_empty() {
        return Err(GeneratorError::RegionEmpty);
    }
    let (t0, t1, x0, x1) = region.bounds();
    if ![t0, t1, x0, x1].iter().all(|v| v.is_finite()) {
        return Err(GeneratorError::InvalidRegion("non-finite bounds".into()));
    }
    match ambient {
        Ambient::Cylinder { circumference } => {
            if x1 - x0 > *circumference {
                return Err(GeneratorError::InvalidRegion(format!(
                    "spatial width {} exceeds the circumference {circumference}",
                    x1 - x0
                )));
            }
        }
        Ambient::Model { space } if space.curvature() < 0.0 => {
            if x0 <= -FRAC_PI_2 || x1 >= FRAC_PI_2 {
                return Err(GeneratorError::InvalidRegion(
                    "spatial range must lie inside the strip |ρ| < π/2".into(),
                ));
            }
            if space.ads_domain() == AdsDomain::GloballyHyperbolic {
                // Largest Δη + |ρ + ρ'| over causal pairs in the region.
                let reach = match *region {
                    Region::Diamond { bottom, top } => {
                        let (u0, v0) = null_coords(bottom);
                        let (u1, v1) = null_coords(top);
                        (v1 - u0).max(u1 - v0)
                    }
                    Region::Rect { t0, t1, x0, x1 } => (t1 - t0) + 2.0 * x0.abs().max(x1.abs()),
                };
                if reach >= PI {
                    return Err(GeneratorError::InvalidRegion(format!(
                        "region reaches past the focal cone (extent {reach} ≥ π); use the full anti-de Sitter mode"
                    )));
                }
            }
        }
        Ambient::Model { space } if space.curvature() > 0.0 => {
            if t0 <= -FRAC_PI_2 || t1 >= FRAC_PI_2 {
                return Err(GeneratorError::InvalidRegion(
                    "time range must lie inside |η| < π/2".into(),
                ));
            }
            if x1 - x0 > 2.0 * PI {
                return Err(GeneratorError::InvalidRegion("spatial width exceeds 2π".into()));
            }
        }
        Ambient::Model { .. } => {}
    }
    Ok(())
}

/// Spacetime volume of the region.
pub fn region_volume(ambient: &Ambient, region: &Region) -> f64 {
    let (t0, t1, x0, x1) = region.bounds();
    match ambient {
        Ambient::Model { space } if space.curvature() < 0.0 => {
            let r2 = 1.0 / -space.curvature();
            simpson(x0, x1, |x| region.time_extent(x) * r2 / x.cos().powi(2))
        }
        Ambient::Model { space } if space.curvature() > 0.0 => {
            let r2 = 1.0 / space.curvature();
            simpson(t0, t1, |t| region.space_extent(t) * r2 / t.cos().powi(2))
        }
        _ => match *region {
            Region::Diamond { bottom, top } => {
                let (u0, v0) = null_coords(bottom);
                let (u1, v1) = null_coords(top);
                0.5 * (u1 - u0) * (v1 - v0)
            }
            Region::Rect { t0, t1, x0, x1 } => (t1 - t0) * (x1 - x0),
        },
    }
}

/// Poisson sprinkling. Points are sorted by time, so index order is a
/// topological order of the causal relation.
pub fn sprinkle(spec: &SprinkleSpec) -> Result<DiscreteSpace, GeneratorError> {
    validate_region(&spec.ambient, &spec.region)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let count = match spec.amount {
        Amount::Count(n) => {
            if n > spec.max_points {
                return Err(GeneratorError::DensityOverflow {
                    requested: n as f64,
                    cap: spec.max_points,
                });
            }
            n
        }
        Amount::Density(rho) => {
            if !(rho > 0.0) || !rho.is_finite() {
                return Err(GeneratorError::InvalidParameter(format!("density {rho}")));
            }
            let mean = rho * region_volume(&spec.ambient, &spec.region);
            if mean > 2.0 * spec.max_points as f64 {
                return Err(GeneratorError::DensityOverflow {
                    requested: mean,
                    cap: spec.max_points,
                });
            }
            let n = Poisson::new(mean)
                .map_err(|e| GeneratorError::InvalidParameter(e.to_string()))?
                .sample(&mut rng) as usize;
            if n > spec.max_points {
                return Err(GeneratorError::DensityOverflow {
                    requested: n as f64,
                    cap: spec.max_points,
                });
            }
            n
        }
    };
    let points = sample_points(&spec.ambient, &spec.region, count, &mut rng);
    let space = DiscreteSpace::from_ambient(points, spec.ambient)?;
    Ok(match spec.tau_mode {
        TauMode::Inherited => space,
        TauMode::IntrinsicWeighted => space.tau_intrinsic(IntrinsicMode::Weighted)?,
        TauMode::IntrinsicLink => space.tau_intrinsic(IntrinsicMode::LinkCount)?,
    })
}

/// `count` i.i.d. points distributed by the volume element on the region,
/// sorted by time then space.
pub fn sample_points(ambient: &Ambient, region: &Region, count: usize, rng: &mut impl Rng) -> Vec<ModelPoint> {
    let (t0, t1, x0, x1) = region.bounds();
    // Volume densities are even in the coordinate they depend on, so their
    // maximum over the box is at the largest absolute value.
    let corner = ModelPoint::new(t0.abs().max(t1.abs()), x0.abs().max(x1.abs()));
    let rho_max = match ambient {
        Ambient::Model { space } if space.curvature() != 0.0 => space.volume_density(corner),
        _ => 1.0,
    };
    let mut pts = Vec::with_capacity(count);
    while pts.len() < count {
        let p = ModelPoint::new(rng.random_range(t0..t1), rng.random_range(x0..x1));
        let u: f64 = rng.random();
        if region.contains(p) && u * rho_max < ambient.volume_density(p) {
            pts.push(ambient.canonical(p));
        }
    }
    pts.sort_by(|a, b| a.time.total_cmp(&b.time).then(a.space.total_cmp(&b.space)));
    pts
}

/// Model space for the usual `--ambient` names.
pub fn ambient_from_name(
    name: &str,
    curvature: Option<f64>,
    circumference: Option<f64>,
    full_ads: bool,
) -> Result<Ambient, GeneratorError> {
    match name {
        "minkowski" => Ok(Ambient::model(ModelSpace::minkowski())),
        "ads" => {
            let k = curvature.unwrap_or(-1.0);
            if !(k < 0.0) {
                return Err(GeneratorError::InvalidParameter(format!(
                    "anti-de Sitter needs K < 0, got {k}"
                )));
            }
            let domain = if full_ads {
                AdsDomain::Full
            } else {
                AdsDomain::GloballyHyperbolic
            };
            Ok(Ambient::model(ModelSpace::new(k).with_ads_domain(domain)))
        }
        "desitter" => {
            let k = curvature.unwrap_or(1.0);
            if !(k > 0.0) {
                return Err(GeneratorError::InvalidParameter(format!(
                    "de Sitter needs K > 0, got {k}"
                )));
            }
            Ok(Ambient::model(ModelSpace::new(k)))
        }
        "cylinder" => {
            let l = circumference.unwrap_or(2.0 * PI);
            if !(l > 0.0) || !l.is_finite() {
                return Err(GeneratorError::InvalidParameter(format!("circumference {l}")));
            }
            Ok(Ambient::cylinder(l))
        }
        other => Err(GeneratorError::InvalidParameter(format!("unknown ambient '{other}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::DEFAULT_AXIOM_TOLERANCE;

    fn mink(count: usize, seed: u64) -> SprinkleSpec {
        let amb = Ambient::model(ModelSpace::minkowski());
        SprinkleSpec::new(amb, SprinkleSpec::default_region(&amb), Amount::Count(count), seed)
    }

    #[test]
    fn empty_and_single() {
        let sp = sprinkle(&mink(0, 1)).unwrap();
        assert!(sp.is_empty());
        assert!(sp.validate_axioms(DEFAULT_AXIOM_TOLERANCE).pass);
        let one = sprinkle(&mink(1, 1)).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.finite_diameter(), 0.0);
    }

    #[test]
    fn deterministic_and_sorted() {
        let a = sprinkle(&mink(200, 42)).unwrap();
        let b = sprinkle(&mink(200, 42)).unwrap();
        assert_eq!(a.tau_entries(), b.tau_entries());
        for i in 1..a.len() {
            assert!(a.coords(i - 1).unwrap().time <= a.coords(i).unwrap().time);
        }
        assert_eq!(
            a.topological_order().unwrap(),
            (0..200).collect::<Vec<u32>>().as_slice()
        );
    }

    #[test]
    fn volumes() {
        let flat = Ambient::model(ModelSpace::minkowski());
        assert_eq!(region_volume(&flat, &Region::diamond((0.0, 0.0), (4.0, 0.0))), 8.0);
        // Anti-de Sitter diamond of half-height h about the origin, K = -1:
        // ∫ 2(h - |ρ|) sec²ρ dρ over [-h, h] integrates by parts to -4 ln cos h.
        let ads = Ambient::model(ModelSpace::new(-1.0));
        let h: f64 = 1.0;
        let exact = -4.0 * h.cos().ln();
        let v = region_volume(&ads, &Region::diamond((-h, 0.0), (h, 0.0)));
        assert!((v - exact).abs() < 1e-6, "{v} vs {exact}");
    }

    #[test]
    fn region_errors() {
        let flat = Ambient::model(ModelSpace::minkowski());
        let bad = SprinkleSpec::new(flat, Region::diamond((0.0, 0.0), (1.0, 2.0)), Amount::Count(3), 0);
        assert!(matches!(sprinkle(&bad), Err(GeneratorError::RegionEmpty)));
        let ads = Ambient::model(ModelSpace::new(-1.0));
        let far = SprinkleSpec::new(ads, Region::diamond((-1.6, 0.0), (1.6, 0.0)), Amount::Count(3), 0);
        assert!(matches!(sprinkle(&far), Err(GeneratorError::InvalidRegion(_))));
        let mut over = mink(10, 0);
        over.max_points = 5;
        assert!(matches!(sprinkle(&over), Err(GeneratorError::DensityOverflow { .. })));
    }

    #[test]
    fn inherited_tau_matches_formula() {
        let sp = sprinkle(&mink(300, 7)).unwrap();
        for (i, j, v) in sp.tau_entries() {
            let (p, q) = (sp.coords(i).unwrap(), sp.coords(j).unwrap());
            let (dt, dx) = (q.time - p.time, q.space - p.space);
            assert!((v - (dt * dt - dx * dx).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn intrinsic_modes() {
        let mut spec = mink(150, 3);
        spec.tau_mode = TauMode::IntrinsicWeighted;
        let w = sprinkle(&spec).unwrap();
        let inh = sprinkle(&mink(150, 3)).unwrap();
        for (i, j, v) in inh.tau_entries() {
            assert!(w.tau(i, j) <= v + 1e-12);
        }
        for i in 0..w.len() {
            for &j in w.links(i) {
                assert_eq!(w.tau(i, j as usize), inh.tau(i, j as usize));
            }
        }
        assert!(w.validate_axioms(DEFAULT_AXIOM_TOLERANCE).pass);
    }
}
