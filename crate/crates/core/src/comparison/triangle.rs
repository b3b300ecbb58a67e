//! Timelike triangles and their sides.
//!
//! Sides come in two flavours. Spaces whose `τ` is inherited from an ambient
//! spacetime use the ambient geodesic between the vertices, sampled on a
//! uniform grid of `τ`-arclength fractions; the interior grid points are
//! ambient points rather than samples. Every other space uses maximal chains
//! of links, with fractions equal to the cumulative `τ`-arclength of each
//! chain vertex.

use std::collections::HashSet;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ComparisonError, Tolerances};
use crate::generators::cylinder::{
    circle_distance, geodesic_multiplicity, maximizing_windings, winding_geodesic, DEFAULT_TIE_TOLERANCE,
};
use crate::model::{finite_diameter_constant, ModelError, ModelPoint, TriangleSides};
use crate::space::{Ambient, DiscreteSpace, Provenance};

/// Interior subdivisions of an ambient side.
pub const DEFAULT_SIDE_GRID: usize = 8;

/// Relative gap `c - (a+b)` below which a triangle counts as degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;

/// Ties between cylinder windings closer than this (relative) are exact.
const EXACT_TIE: f64 = 1e-12;

/// Candidate sets up to this size are enumerated exhaustively.
const EXHAUSTIVE_LIMIT: usize = 120;

const ATTEMPTS_PER_TRIANGLE: usize = 50;

/// A point of a triangle: a sample of the space, or an ambient point on a
/// geodesic side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Site {
    Sample(usize),
    Ambient(ModelPoint),
}

impl Site {
    pub fn sample(self) -> Option<usize> {
        match self {
            Site::Sample(i) => Some(i),
            Site::Ambient(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SideKind {
    Xy,
    Yz,
    Xz,
}

impl SideKind {
    pub const ALL: [SideKind; 3] = [SideKind::Xy, SideKind::Yz, SideKind::Xz];

    fn slot(self) -> usize {
        match self {
            SideKind::Xy => 0,
            SideKind::Yz => 1,
            SideKind::Xz => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SideKind::Xy => "xy",
            SideKind::Yz => "yz",
            SideKind::Xz => "xz",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SideMode {
    /// Ambient geodesics for inherited spaces with coordinates, chains otherwise.
    #[default]
    Auto,
    Ambient,
    Chains,
}

/// A side of a triangle, from its first to its last vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Side {
    pub kind: SideKind,
    pub sites: Vec<Site>,
    /// `τ`-arclength fraction of each site, from 0 to 1.
    pub fractions: Vec<f64>,
    /// `τ` between the endpoints.
    pub length: f64,
    /// `τ` between the endpoints minus the length of the side.
    pub gap: f64,
    /// Number of maximizing geodesics or chains between the endpoints.
    pub multiplicity: u64,
    /// Ambient geodesic the side follows, if any.
    pub path: Option<GeodesicPath>,
}

/// Ambient geodesic from `from` to `to`; `winding` selects the lift on the
/// cylinder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicPath {
    pub from: ModelPoint,
    pub to: ModelPoint,
    pub winding: Option<i64>,
}

impl Side {
    pub fn first(&self) -> Site {
        self.sites[0]
    }

    pub fn last(&self) -> Site {
        *self.sites.last().unwrap()
    }

    /// Restriction to the sites from `from` to `to` inclusive, with
    /// fractions rescaled to `[0, 1]`.
    pub fn slice(&self, kind: SideKind, from: usize, to: usize, length: f64) -> Side {
        let (f0, f1) = (self.fractions[from], self.fractions[to]);
        let chain_length = (self.length - self.gap) * (f1 - f0);
        Side {
            kind,
            sites: self.sites[from..=to].to_vec(),
            fractions: self.fractions[from..=to]
                .iter()
                .map(|f| ((f - f0) / (f1 - f0)).clamp(0.0, 1.0))
                .collect(),
            length,
            gap: length - chain_length,
            multiplicity: self.multiplicity,
            path: None,
        }
    }
}

/// A point on a triangle side, snapped to one of the side's sites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SidePoint {
    pub side: SideKind,
    /// Index of the site on the side.
    pub index: usize,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimelikeTriangle {
    /// `x ≪ y ≪ z`.
    pub vertices: [Site; 3],
    /// Sides in the order `xy`, `yz`, `xz`.
    pub sides: [Side; 3],
    pub lengths: TriangleSides,
    pub degenerate: bool,
}

impl TimelikeTriangle {
    pub fn side(&self, kind: SideKind) -> &Side {
        &self.sides[kind.slot()]
    }

    pub fn x(&self) -> Site {
        self.vertices[0]
    }

    pub fn y(&self) -> Site {
        self.vertices[1]
    }

    pub fn z(&self) -> Site {
        self.vertices[2]
    }

    /// Vertex indices when all three vertices are samples.
    pub fn sample_vertices(&self) -> Option<[usize; 3]> {
        Some([
            self.vertices[0].sample()?,
            self.vertices[1].sample()?,
            self.vertices[2].sample()?,
        ])
    }

    pub fn side_point(&self, side: SideKind, index: usize) -> Result<SidePoint, ComparisonError> {
        let s = self.side(side);
        let fraction = *s.fractions.get(index).ok_or_else(|| {
            ComparisonError::PairOffTriangle(format!(
                "site {index} on side {} with {} sites",
                side.as_str(),
                s.sites.len()
            ))
        })?;
        Ok(SidePoint { side, index, fraction })
    }

    /// Side point at the site closest to the given fraction.
    pub fn snap(&self, side: SideKind, fraction: f64) -> SidePoint {
        let s = self.side(side);
        let index = (0..s.fractions.len())
            .min_by(|&i, &j| {
                (s.fractions[i] - fraction)
                    .abs()
                    .total_cmp(&(s.fractions[j] - fraction).abs())
            })
            .unwrap();
        SidePoint {
            side,
            index,
            fraction: s.fractions[index],
        }
    }

    pub fn site(&self, p: &SidePoint) -> Result<Site, ComparisonError> {
        let s = self.side(p.side);
        let site = s
            .sites
            .get(p.index)
            .ok_or_else(|| ComparisonError::PairOffTriangle(format!("site {} on side {}", p.index, p.side.as_str())))?;
        if (s.fractions[p.index] - p.fraction).abs() > 1e-12 {
            return Err(ComparisonError::PairOffTriangle(format!(
                "fraction {} does not match site {} on side {}",
                p.fraction,
                p.index,
                p.side.as_str()
            )));
        }
        Ok(*site)
    }

    /// All side points of one side.
    pub fn side_points(&self, side: SideKind) -> Vec<SidePoint> {
        self.side(side)
            .fractions
            .iter()
            .enumerate()
            .map(|(index, &fraction)| SidePoint { side, index, fraction })
            .collect()
    }
}

/// Which triples are eligible as triangles.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TriangleFilter {
    /// Exclusive upper bound on the longest side; `None` for no bound.
    pub max_longest: Option<f64>,
    /// Restricts all three vertices to this set.
    pub members: Option<Vec<usize>>,
}

impl TriangleFilter {
    /// Triangles realizable in every model space with the given curvatures.
    pub fn realizable_for(curvatures: &[f64]) -> Self {
        let d = curvatures
            .iter()
            .map(|&k| finite_diameter_constant(k))
            .fold(f64::INFINITY, f64::min);
        Self {
            max_longest: d.is_finite().then_some(d),
            members: None,
        }
    }

    pub fn within(mut self, members: Vec<usize>) -> Self {
        self.members = Some(members);
        self
    }
}

/// Triangle construction and evaluation over one space.
#[derive(Debug, Clone)]
pub struct Comparator<'a> {
    sp: &'a DiscreteSpace,
    ambient_sides: bool,
    grid: usize,
    pub tolerances: Tolerances,
    /// Largest number of side-point pairs evaluated per triangle.
    pub pair_budget: usize,
}

impl<'a> Comparator<'a> {
    pub fn new(sp: &'a DiscreteSpace) -> Self {
        Self {
            sp,
            ambient_sides: Self::has_ambient_geometry(sp) && sp.provenance() == Provenance::Inherited,
            grid: DEFAULT_SIDE_GRID,
            tolerances: Tolerances::default(),
            pair_budget: 256,
        }
    }

    fn has_ambient_geometry(sp: &DiscreteSpace) -> bool {
        sp.ambient().is_some() && (0..sp.len()).all(|i| sp.coords(i).is_some())
    }

    pub fn with_side_mode(mut self, mode: SideMode) -> Result<Self, ComparisonError> {
        self.ambient_sides = match mode {
            SideMode::Auto => Self::has_ambient_geometry(self.sp) && self.sp.provenance() == Provenance::Inherited,
            SideMode::Chains => false,
            SideMode::Ambient => {
                if !Self::has_ambient_geometry(self.sp) {
                    return Err(ComparisonError::InsufficientSamples(
                        "ambient sides need an ambient and coordinates for every point".into(),
                    ));
                }
                true
            }
        };
        Ok(self)
    }

    pub fn with_grid(mut self, grid: usize) -> Self {
        self.grid = grid.max(1);
        self
    }

    pub fn with_tolerances(mut self, tolerances: Tolerances) -> Self {
        self.tolerances = tolerances;
        self
    }

    pub fn with_pair_budget(mut self, budget: usize) -> Self {
        self.pair_budget = budget.max(1);
        self
    }

    pub fn space(&self) -> &'a DiscreteSpace {
        self.sp
    }

    pub fn uses_ambient_sides(&self) -> bool {
        self.ambient_sides
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    fn ambient(&self) -> Option<&'a Ambient> {
        self.sp.ambient()
    }

    pub fn site_coords(&self, s: Site) -> Option<ModelPoint> {
        match s {
            Site::Sample(i) => self.sp.coords(i),
            Site::Ambient(p) => Some(p),
        }
    }

    /// `τ` between two sites. Mixed or ambient pairs use the ambient; a pair
    /// beyond the ambient's diameter gives `+∞`.
    pub fn site_tau(&self, a: Site, b: Site) -> f64 {
        if let (Site::Sample(i), Site::Sample(j)) = (a, b) {
            return self.sp.tau(i, j);
        }
        let (Some(amb), Some(p), Some(q)) = (self.ambient(), self.site_coords(a), self.site_coords(b)) else {
            return f64::NAN;
        };
        match amb.tau(p, q) {
            Ok(t) => t,
            Err(ModelError::ExceedsModelDiameter { .. }) => f64::INFINITY,
            Err(_) => f64::NAN,
        }
    }

    /// Number of maximizing geodesics from `a` to `b`, counting near-ties on
    /// the cylinder. `None` when the pair is not timelike related or has no
    /// geodesic the comparator can see.
    pub fn pair_multiplicity(&self, a: Site, b: Site) -> Option<u64> {
        if !(self.site_tau(a, b) > 0.0) {
            return None;
        }
        if self.uses_ambient_sides() {
            let (p, q) = (self.site_coords(a)?, self.site_coords(b)?);
            return match *self.ambient()? {
                Ambient::Model { .. } => Some(1),
                Ambient::Cylinder { circumference } => {
                    Some(geodesic_multiplicity(circumference, p, q, DEFAULT_TIE_TOLERANCE) as u64)
                }
            };
        }
        let (i, j) = (a.sample()?, b.sample()?);
        self.sp.geodesic_chain(i, j).ok().map(|g| g.multiplicity)
    }

    /// Triangle on three samples `x ≪ y ≪ z`.
    pub fn triangle(&self, x: usize, y: usize, z: usize) -> Result<TimelikeTriangle, ComparisonError> {
        let n = self.sp.len();
        for i in [x, y, z] {
            if i >= n {
                return Err(crate::space::SpaceError::IndexOutOfRange { index: i, len: n }.into());
            }
        }
        self.triangle_from_sites([Site::Sample(x), Site::Sample(y), Site::Sample(z)])
    }

    pub fn triangle_from_sites(&self, v: [Site; 3]) -> Result<TimelikeTriangle, ComparisonError> {
        self.build_triangle(v, [None, None, None])
    }

    /// Triangle on the given vertices. In chain mode, supplied sides are used
    /// as they are; missing ones are computed.
    pub(crate) fn build_triangle(
        &self,
        v: [Site; 3],
        given: [Option<Side>; 3],
    ) -> Result<TimelikeTriangle, ComparisonError> {
        let a = self.site_tau(v[0], v[1]);
        let b = self.site_tau(v[1], v[2]);
        let c = self.site_tau(v[0], v[2]);
        if !(a > 0.0 && b > 0.0 && c > 0.0) {
            return Err(ComparisonError::NotTimelikeRelated(format!(
                "τ(x,y) = {a}, τ(y,z) = {b}, τ(x,z) = {c}"
            )));
        }
        let sides = if self.ambient_sides {
            let y = self.site_coords(v[1]);
            [
                self.ambient_side(SideKind::Xy, v[0], v[1], None)?,
                self.ambient_side(SideKind::Yz, v[1], v[2], None)?,
                self.ambient_side(SideKind::Xz, v[0], v[2], y)?,
            ]
        } else {
            let idx = |s: Site| {
                s.sample()
                    .ok_or_else(|| ComparisonError::InsufficientSamples("chain sides need sample vertices".into()))
            };
            let (x, y, z) = (idx(v[0])?, idx(v[1])?, idx(v[2])?);
            let [gxy, gyz, gxz] = given;
            [
                match gxy {
                    Some(s) => s,
                    None => self.chain_side(SideKind::Xy, x, y, None)?,
                },
                match gyz {
                    Some(s) => s,
                    None => self.chain_side(SideKind::Yz, y, z, None)?,
                },
                match gxz {
                    Some(s) => s,
                    None => self.chain_side(SideKind::Xz, x, z, Some(y))?,
                },
            ]
        };
        Ok(TimelikeTriangle {
            vertices: v,
            sides,
            lengths: TriangleSides::new(a, b, c),
            degenerate: c - (a + b) < DEGENERACY_TOLERANCE * c,
        })
    }

    /// Point at `τ`-arclength fraction `f` along an ambient path.
    pub fn path_point(&self, path: &GeodesicPath, f: f64) -> Result<Site, ComparisonError> {
        let amb = self.ambient().ok_or(crate::space::SpaceError::NoAmbient)?;
        let p = match (*amb, path.winding) {
            (Ambient::Cylinder { circumference }, Some(w)) => winding_geodesic(circumference, path.from, path.to, w, f),
            _ => amb.geodesic(path.from, path.to, f)?,
        };
        Ok(Site::Ambient(amb.canonical(p)))
    }

    /// Side between two sites along the ambient geodesic. On the cylinder an
    /// exactly tied winding that does not pass through `avoid` is preferred.
    pub(crate) fn ambient_side(
        &self,
        kind: SideKind,
        u: Site,
        v: Site,
        avoid: Option<ModelPoint>,
    ) -> Result<Side, ComparisonError> {
        let amb = self.ambient().ok_or(crate::space::SpaceError::NoAmbient)?;
        let missing =
            |s: Site| ComparisonError::Space(crate::space::SpaceError::MissingCoordinates(s.sample().unwrap_or(0)));
        let cu = self.site_coords(u).ok_or_else(|| missing(u))?;
        let cv = self.site_coords(v).ok_or_else(|| missing(v))?;
        let length = self.site_tau(u, v);
        if !(length > 0.0) {
            return Err(ComparisonError::NotTimelikeRelated(format!(
                "side {} has τ = {length}",
                kind.as_str()
            )));
        }
        let n = self.grid;
        let mut sites = Vec::with_capacity(n + 1);
        let mut fractions = Vec::with_capacity(n + 1);
        sites.push(u);
        fractions.push(0.0);
        let (multiplicity, winding);
        match *amb {
            Ambient::Model { space } => {
                multiplicity = 1;
                winding = None;
                for k in 1..n {
                    let f = k as f64 / n as f64;
                    sites.push(Site::Ambient(amb.canonical(space.geodesic(cu, cv, f)?)));
                    fractions.push(f);
                }
            }
            Ambient::Cylinder { circumference: l } => {
                multiplicity = geodesic_multiplicity(l, cu, cv, DEFAULT_TIE_TOLERANCE) as u64;
                let tied = maximizing_windings(l, cu, cv, EXACT_TIE);
                let passes_through = |w: i64, a: ModelPoint| {
                    let s = (a.time - cu.time) / (cv.time - cu.time);
                    (0.0..=1.0).contains(&s) && {
                        let g = winding_geodesic(l, cu, cv, w, s);
                        circle_distance(l, g.space - a.space) < 1e-9 * l.max(1.0)
                    }
                };
                let w = tied
                    .iter()
                    .find(|w| avoid.is_none_or(|a| !passes_through(w.winding, a)))
                    .or(tied.first())
                    .ok_or(ModelError::NotTimelikeRelated)?
                    .winding;
                winding = Some(w);
                for k in 1..n {
                    let f = k as f64 / n as f64;
                    sites.push(Site::Ambient(amb.canonical(winding_geodesic(l, cu, cv, w, f))));
                    fractions.push(f);
                }
            }
        }
        sites.push(v);
        fractions.push(1.0);
        Ok(Side {
            kind,
            sites,
            fractions,
            length,
            gap: 0.0,
            multiplicity,
            path: Some(GeodesicPath {
                from: cu,
                to: cv,
                winding,
            }),
        })
    }

    /// Side between two samples along a maximal chain, avoiding `avoid` when
    /// an equally long chain does.
    pub(crate) fn chain_side(
        &self,
        kind: SideKind,
        u: usize,
        v: usize,
        avoid: Option<usize>,
    ) -> Result<Side, ComparisonError> {
        let g = match avoid {
            Some(a) => match self.sp.geodesic_chain_excluding(u, v, &[a])? {
                Some(g) => g,
                None => self.sp.geodesic_chain(u, v)?,
            },
            None => self.sp.geodesic_chain(u, v)?,
        };
        let arcs = g.chain.arclengths(self.sp);
        let total = g.chain.tau_length;
        let fractions = arcs
            .iter()
            .map(|s| if total > 0.0 { (s / total).clamp(0.0, 1.0) } else { 0.0 })
            .collect();
        Ok(Side {
            kind,
            sites: g.chain.vertices.iter().map(|&i| Site::Sample(i)).collect(),
            fractions,
            length: self.sp.tau(u, v),
            gap: g.gap,
            multiplicity: g.multiplicity,
            path: None,
        })
    }

    /// Side from `u` to `v` in whichever mode the comparator uses.
    pub(crate) fn side_between(&self, kind: SideKind, u: Site, v: Site) -> Result<Side, ComparisonError> {
        if self.ambient_sides {
            self.ambient_side(kind, u, v, None)
        } else {
            match (u, v) {
                (Site::Sample(a), Site::Sample(b)) => self.chain_side(kind, a, b, None),
                _ => Err(ComparisonError::InsufficientSamples(
                    "chain sides need sample vertices".into(),
                )),
            }
        }
    }

    /// Seeded sample of at most `budget` timelike triples `x ≪ y ≪ z` passing
    /// the filter, without repetition.
    pub fn sample_triples(&self, filter: &TriangleFilter, budget: usize, seed: u64) -> Vec<[usize; 3]> {
        let sp = self.sp;
        let n = sp.len();
        let mut member = vec![filter.members.is_none(); n];
        let candidates: Vec<usize> = match &filter.members {
            Some(m) => {
                let mut m: Vec<usize> = m.iter().copied().filter(|&i| i < n).collect();
                m.sort_unstable();
                m.dedup();
                for &i in &m {
                    member[i] = true;
                }
                m
            }
            None => (0..n).collect(),
        };
        let max = filter.max_longest.unwrap_or(f64::INFINITY);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if budget == 0 || candidates.len() < 3 {
            return Vec::new();
        }
        let far_ends = |x: usize| -> Vec<usize> {
            sp.future(x)
                .iter()
                .map(|&z| z as usize)
                .filter(|&z| member[z] && sp.timelike(x, z) && sp.tau(x, z) < max)
                .collect()
        };
        let middles = |x: usize, z: usize| -> Vec<usize> {
            sp.future(x)
                .iter()
                .map(|&y| y as usize)
                .filter(|&y| y != z && member[y] && sp.timelike(x, y) && sp.timelike(y, z))
                .collect()
        };

        if candidates.len() <= EXHAUSTIVE_LIMIT {
            let mut all = Vec::new();
            for &x in &candidates {
                for z in far_ends(x) {
                    for y in middles(x, z) {
                        all.push([x, y, z]);
                    }
                }
            }
            all.sort_unstable();
            if all.len() <= budget {
                return all;
            }
            let mut picked = index::sample(&mut rng, all.len(), budget).into_vec();
            picked.sort_unstable();
            return picked.into_iter().map(|i| all[i]).collect();
        }

        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for _ in 0..budget.saturating_mul(ATTEMPTS_PER_TRIANGLE) {
            if out.len() == budget {
                break;
            }
            let x = candidates[rng.random_range(0..candidates.len())];
            let zs = far_ends(x);
            if zs.is_empty() {
                continue;
            }
            let z = zs[rng.random_range(0..zs.len())];
            let ys = middles(x, z);
            if ys.is_empty() {
                continue;
            }
            let y = ys[rng.random_range(0..ys.len())];
            if seen.insert([x, y, z]) {
                out.push([x, y, z]);
            }
        }
        out
    }

    /// Seeded sample of triangles with their sides. Triples whose sides
    /// cannot be built are dropped.
    pub fn enumerate_triangles(&self, filter: &TriangleFilter, budget: usize, seed: u64) -> Vec<TimelikeTriangle> {
        self.sample_triples(filter, budget, seed)
            .into_iter()
            .filter_map(|[x, y, z]| self.triangle(x, y, z).ok())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelSpace;
    use crate::space::{Relation, TauSource};

    fn chain_space(tau: (f64, f64, f64)) -> DiscreteSpace {
        DiscreteSpace::build(
            vec![None; 3],
            None,
            Provenance::Explicit,
            Relation::Pairs(vec![(0, 1), (1, 2)]),
            TauSource::Explicit(vec![(0, 1, tau.0), (1, 2, tau.1), (0, 2, tau.2)]),
        )
        .unwrap()
    }

    #[test]
    fn antichain_has_no_triangles() {
        let sp = DiscreteSpace::build(
            vec![None; 4],
            None,
            Provenance::Explicit,
            Relation::Pairs(vec![]),
            TauSource::Explicit(vec![]),
        )
        .unwrap();
        let c = Comparator::new(&sp);
        assert!(c.enumerate_triangles(&TriangleFilter::default(), 10, 1).is_empty());
    }

    #[test]
    fn three_chain_has_one_triangle() {
        let sp = chain_space((1.0, 1.0, 2.5));
        let c = Comparator::new(&sp);
        assert!(!c.uses_ambient_sides());
        let ts = c.enumerate_triangles(&TriangleFilter::default(), 10, 1);
        assert_eq!(ts.len(), 1);
        let t = &ts[0];
        assert!(!t.degenerate);
        assert_eq!(t.sample_vertices(), Some([0, 1, 2]));
        assert_eq!(t.lengths, TriangleSides::new(1.0, 1.0, 2.5));
        // The xz side is the chain through y, shorter than τ(x,z).
        assert_eq!(t.side(SideKind::Xz).sites.len(), 3);
        assert!((t.side(SideKind::Xz).gap - 0.5).abs() < 1e-15);
    }

    #[test]
    fn diameter_filter_excludes_long_triangles() {
        let sp = chain_space((1.0, 1.0, 3.5));
        let c = Comparator::new(&sp);
        assert!(c
            .enumerate_triangles(&TriangleFilter::realizable_for(&[-1.0]), 10, 1)
            .is_empty());
        assert_eq!(
            c.enumerate_triangles(&TriangleFilter::realizable_for(&[0.0]), 10, 1)
                .len(),
            1
        );
    }

    #[test]
    fn ambient_sides_on_inherited_space() {
        let pts = vec![
            ModelPoint::new(0.0, 0.0),
            ModelPoint::new(1.0, 0.3),
            ModelPoint::new(2.5, 0.0),
        ];
        let sp = DiscreteSpace::from_ambient(pts, Ambient::model(ModelSpace::minkowski())).unwrap();
        let c = Comparator::new(&sp);
        assert!(c.uses_ambient_sides());
        let t = c.triangle(0, 1, 2).unwrap();
        let xz = t.side(SideKind::Xz);
        assert_eq!(xz.sites.len(), DEFAULT_SIDE_GRID + 1);
        for (s, f) in xz.sites.iter().zip(&xz.fractions) {
            let d = c.site_tau(Site::Sample(0), *s);
            assert!((d - f * t.lengths.c).abs() < 1e-12);
        }
        let p = t.snap(SideKind::Xy, 0.3);
        assert_eq!(p.index, 2);
        assert_eq!(p.fraction, 0.25);
        assert!(t.side_point(SideKind::Yz, 99).is_err());
    }

    #[test]
    fn sampling_is_deterministic_and_bounded() {
        let pts: Vec<ModelPoint> = (0..200)
            .map(|i| {
                let f = i as f64;
                ModelPoint::new((f * 0.618).fract() * 4.0, ((f * 0.414).fract() - 0.5) * 1.5)
            })
            .collect();
        let sp = DiscreteSpace::from_ambient(pts, Ambient::model(ModelSpace::minkowski())).unwrap();
        let c = Comparator::new(&sp);
        let a = c.sample_triples(&TriangleFilter::default(), 50, 9);
        let b = c.sample_triples(&TriangleFilter::default(), 50, 9);
        assert_eq!(a, b);
        assert_eq!(a.len(), 50);
        for [x, y, z] in a {
            assert!(sp.timelike(x, y) && sp.timelike(y, z));
        }
    }
}
