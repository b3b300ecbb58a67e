//! Small deterministic spaces with explicit `τ` and named points.

use std::f64::consts::PI;

use super::GeneratorError;
use crate::model::{HingeOrientation, ModelError, ModelPoint, ModelSpace};
use crate::space::{Ambient, DiscreteSpace, Provenance, Relation, TauSource};

pub const FIXTURE_NAMES: [&str; 4] = [
    "gluing-basic",
    "cylinder-counterexample",
    "degenerate-triangle",
    "bonnet-myers",
];

/// Segments per side of the cylinder counterexample geodesics.
pub const CYLINDER_SEGMENTS: usize = 8;

/// Parameters of the diameter-bound fixture, in units with `K = -1`.
pub const BONNET_EPSILON: f64 = 0.1;
pub const BONNET_M: f64 = 0.1;
pub const BONNET_OMEGA: f64 = 0.5;

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub space: DiscreteSpace,
    labels: Vec<(&'static str, usize)>,
}

impl Fixture {
    /// Index of a named point.
    pub fn label(&self, name: &str) -> usize {
        self.labels
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, i)| *i)
            .unwrap_or_else(|| panic!("fixture {} has no point '{name}'", self.name))
    }

    pub fn labels(&self) -> &[(&'static str, usize)] {
        &self.labels
    }
}

pub fn fixture(name: &str) -> Result<Fixture, GeneratorError> {
    match name {
        "gluing-basic" => gluing_basic(),
        "cylinder-counterexample" => cylinder_counterexample(),
        "degenerate-triangle" => degenerate_triangle(),
        "bonnet-myers" => bonnet_myers(),
        other => Err(GeneratorError::UnknownFixture(other.to_string())),
    }
}

type Labelled = (DiscreteSpace, Vec<(&'static str, usize)>);

/// Explicit-τ copy of an ambient sample; `tau` may override pairs.
fn explicit(
    ambient: Ambient,
    points: &[(&'static str, f64, f64)],
    tau: impl Fn(usize, usize, ModelPoint, ModelPoint) -> Result<f64, ModelError>,
) -> Result<Labelled, GeneratorError> {
    let coords: Vec<ModelPoint> = points.iter().map(|&(_, t, x)| ModelPoint::new(t, x)).collect();
    let mut pairs = Vec::new();
    let mut entries = Vec::new();
    for i in 0..coords.len() {
        for j in 0..coords.len() {
            if i != j && ambient.relation(coords[i], coords[j])?.is_causal() {
                pairs.push((i, j));
                entries.push((i, j, tau(i, j, coords[i], coords[j])?));
            }
        }
    }
    let space = DiscreteSpace::build(
        coords.into_iter().map(Some).collect(),
        Some(ambient),
        Provenance::Explicit,
        Relation::Pairs(pairs),
        TauSource::Explicit(entries),
    )?;
    let labels = points.iter().enumerate().map(|(i, &(n, _, _))| (n, i)).collect();
    Ok((space, labels))
}

/// Flat triangle `x=(0,0)`, `y=(2,0.5)`, `z=(4,0)` with `p=(1,0)` on the
/// long side and `p ≪ y`. Midpoints are added so that every side is
/// realized by a chain of links; `p` and `y` are linked directly.
fn gluing_basic() -> Result<Fixture, GeneratorError> {
    let flat = Ambient::model(ModelSpace::minkowski());
    let pts = [
        ("x", 0.0, 0.0),
        ("p", 1.0, 0.0),
        ("xy-mid", 1.0, 0.25),
        ("xz-mid", 2.0, 0.0),
        ("y", 2.0, 0.5),
        ("pz-mid", 3.0, 0.0),
        ("yz-mid", 3.0, 0.25),
        ("z", 4.0, 0.0),
    ];
    let (space, labels) = explicit(flat, &pts, |_, _, p, q| flat.tau(p, q))?;
    Ok(Fixture {
        name: "gluing-basic",
        space,
        labels,
    })
}

fn degenerate_triangle() -> Result<Fixture, GeneratorError> {
    let flat = Ambient::model(ModelSpace::minkowski());
    let pts = [("x", 0.0, 0.0), ("y", 1.0, 0.0), ("z", 2.0, 0.0)];
    let (space, labels) = explicit(flat, &pts, |_, _, p, q| flat.tau(p, q))?;
    Ok(Fixture {
        name: "degenerate-triangle",
        space,
        labels,
    })
}

/// Cylinder of circumference `2π` with `x=(0,0)` and `z=(4,π)` on opposite
/// lines, the two geodesics between them sampled at eighths, `y` halfway
/// along the left one, `p` a quarter of the way along the left one and `q`
/// three quarters of the way along the right one.
fn cylinder_counterexample() -> Result<Fixture, GeneratorError> {
    let l = 2.0 * PI;
    let amb = Ambient::cylinder(l);
    const LEFT: [&str; 7] = ["l1", "l2", "l3", "l4", "l5", "l6", "l7"];
    const RIGHT: [&str; 7] = ["r1", "r2", "r3", "r4", "r5", "r6", "r7"];
    let seg = CYLINDER_SEGMENTS as f64;
    let mut pts = vec![("x", 0.0, 0.0)];
    for k in 1..CYLINDER_SEGMENTS {
        let f = k as f64 / seg;
        pts.push((LEFT[k - 1], 4.0 * f, (-PI * f).rem_euclid(l)));
        pts.push((RIGHT[k - 1], 4.0 * f, PI * f));
    }
    pts.push(("z", 4.0, PI));
    let (space, mut labels) = explicit(amb, &pts, |_, _, p, q| amb.tau(p, q))?;
    let idx = |n: &str| labels.iter().find(|(m, _)| *m == n).unwrap().1;
    let (y, p, q) = (idx("l4"), idx("l2"), idx("r6"));
    labels.extend([("y", y), ("p", p), ("q", q)]);
    Ok(Fixture {
        name: "cylinder-counterexample",
        space,
        labels,
    })
}

/// Comparison configuration from the diameter-bound argument at `K = -1`:
/// `a ≪ x ≪ z ≪ b` on the time axis with `τ(a,x) = τ(x,b) = t = π/2 + ε/2`,
/// `τ(a,z) = 5π/8`, and `y` at proper time `m` from `x` with rapidity `ω`.
/// The pair `(a, b)` carries the explicit value `τ = 2t = π + ε`, which the
/// model cannot realize; the resulting space violates the reverse triangle
/// inequality at `(a, y, b)`.
fn bonnet_myers() -> Result<Fixture, GeneratorError> {
    let ads = ModelSpace::new(-1.0);
    let amb = Ambient::model(ads);
    let t = bonnet_t();
    let t_plus = 5.0 * PI / 8.0;
    let a = ads.point_on_axis(-t)?;
    let b = ads.point_on_axis(t)?;
    let z = ads.point_on_axis(t_plus - t)?;
    let y = ads.point_from_origin(BONNET_M, BONNET_OMEGA)?;
    let pts = [
        ("a", a.time, a.space),
        ("x", 0.0, 0.0),
        ("y", y.time, y.space),
        ("z", z.time, z.space),
        ("b", b.time, b.space),
    ];
    let (space, labels) = explicit(
        amb,
        &pts,
        |i, j, p, q| {
            if (i, j) == (0, 4) {
                Ok(2.0 * t)
            } else {
                ads.tau(p, q)
            }
        },
    )?;
    Ok(Fixture {
        name: "bonnet-myers",
        space,
        labels,
    })
}

/// Half the length of the long geodesic in the diameter-bound fixture.
pub fn bonnet_t() -> f64 {
    0.5 * PI + 0.5 * BONNET_EPSILON
}

/// The two hinge sides `(p̃, q̃)` of the diameter-bound argument.
pub fn bonnet_hinge_sides() -> Result<(f64, f64), ModelError> {
    let ads = ModelSpace::new(-1.0);
    let t = bonnet_t();
    Ok((
        ads.law_of_cosines(BONNET_M, t, BONNET_OMEGA, HingeOrientation::Mixed)?,
        ads.law_of_cosines(BONNET_M, t, BONNET_OMEGA, HingeOrientation::Same)?,
    ))
}
