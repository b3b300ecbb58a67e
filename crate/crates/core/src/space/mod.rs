//! Finite Lorentzian pre-length spaces.
//!
//! A [`DiscreteSpace`] stores a causal order (its strict causal futures and
//! the transitively reduced link relation) and a time separation `τ`. The
//! timelike relation is derived: `x ≪ y` exactly when `τ(x, y) > 0`.

mod chains;
mod io;
mod validate;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generators::cylinder;
use crate::model::{AdsDomain, Causality, ModelError, ModelPoint, ModelSpace};

pub use chains::{Chain, GeodesicChain, IntrinsicMode};
pub use io::{read_cset, to_json, write_cset, CSET_HEADER};
pub use validate::{AxiomKind, AxiomReport, AxiomViolation, DEFAULT_AXIOM_TOLERANCE};

/// Spaces with fewer points than this keep a dense `τ` matrix.
pub const DENSE_LIMIT: usize = 4096;

#[derive(Debug, Error)]
pub enum SpaceError {
    #[error("causal relation contains a cycle through point {0}")]
    CyclicOrder(usize),
    #[error("points {x} and {y} are not timelike related")]
    NotTimelikeRelated { x: usize, y: usize },
    #[error("point index {index} out of range for a space of {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid time separation {value} for pair ({x}, {y})")]
    InvalidTau { x: usize, y: usize, value: f64 },
    #[error("point {0} has no ambient coordinates")]
    MissingCoordinates(usize),
    #[error("space has no ambient geometry")]
    NoAmbient,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Where the time separation of a space came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Restricted from the ambient spacetime.
    Inherited,
    /// Longest-chain estimate over the link relation.
    Intrinsic,
    /// Supplied by hand or read from a file.
    Explicit,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Inherited => "inherited",
            Provenance::Intrinsic => "intrinsic",
            Provenance::Explicit => "explicit",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "inherited" => Provenance::Inherited,
            "intrinsic" => Provenance::Intrinsic,
            "explicit" => Provenance::Explicit,
            _ => return None,
        })
    }
}

/// Ambient spacetime that sample coordinates live in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Ambient {
    Model { space: ModelSpace },
    Cylinder { circumference: f64 },
}

impl Ambient {
    pub fn model(space: ModelSpace) -> Self {
        Ambient::Model { space }
    }

    pub fn cylinder(circumference: f64) -> Self {
        Ambient::Cylinder { circumference }
    }

    /// Model space the ambient is locally isometric to.
    pub fn local_model(&self) -> ModelSpace {
        match self {
            Ambient::Model { space } => *space,
            Ambient::Cylinder { .. } => ModelSpace::minkowski(),
        }
    }

    pub fn check_domain(&self, p: ModelPoint) -> Result<(), ModelError> {
        match self {
            Ambient::Model { space } => space.check_domain(p),
            Ambient::Cylinder { .. } => ModelSpace::minkowski().check_domain(p),
        }
    }

    pub fn tau(&self, p: ModelPoint, q: ModelPoint) -> Result<f64, ModelError> {
        match self {
            Ambient::Model { space } => space.tau(p, q),
            Ambient::Cylinder { circumference } => {
                self.check_domain(p)?;
                self.check_domain(q)?;
                Ok(cylinder::cylinder_tau(*circumference, p, q))
            }
        }
    }

    pub fn relation(&self, p: ModelPoint, q: ModelPoint) -> Result<Causality, ModelError> {
        match self {
            Ambient::Model { space } => space.relation(p, q),
            Ambient::Cylinder { circumference } => {
                self.check_domain(p)?;
                self.check_domain(q)?;
                Ok(cylinder::cylinder_relation(*circumference, p, q))
            }
        }
    }

    /// Geodesic from `p` to `q`. On the cylinder the winding with the largest
    /// separation is used, the smallest winding number among exact ties.
    pub fn geodesic(&self, p: ModelPoint, q: ModelPoint, s: f64) -> Result<ModelPoint, ModelError> {
        match self {
            Ambient::Model { space } => space.geodesic(p, q, s),
            Ambient::Cylinder { circumference } => {
                let best = cylinder::maximizing_windings(*circumference, p, q, 0.0);
                let w = best.first().ok_or(ModelError::NotTimelikeRelated)?;
                Ok(cylinder::winding_geodesic(*circumference, p, q, w.winding, s))
            }
        }
    }

    pub fn volume_density(&self, p: ModelPoint) -> f64 {
        match self {
            Ambient::Model { space } => space.volume_density(p),
            Ambient::Cylinder { .. } => 1.0,
        }
    }

    /// Reduces the space coordinate to its canonical range.
    pub fn canonical(&self, p: ModelPoint) -> ModelPoint {
        match self {
            Ambient::Cylinder { circumference } => {
                ModelPoint::new(p.time, cylinder::wrap_space(*circumference, p.space))
            }
            Ambient::Model { space } if space.curvature() > 0.0 => {
                let x = (p.space + PI).rem_euclid(2.0 * PI) - PI;
                ModelPoint::new(p.time, x)
            }
            _ => p,
        }
    }

    /// Euclidean distance of chart coordinates, used for reporting only.
    pub fn chart_distance(&self, p: ModelPoint, q: ModelPoint) -> f64 {
        match self {
            Ambient::Model { space } => space.chart_distance(p, q),
            Ambient::Cylinder { circumference } => {
                (q.time - p.time).hypot(cylinder::circle_distance(*circumference, q.space - p.space))
            }
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            Ambient::Model { space } => space.diameter(),
            Ambient::Cylinder { .. } => f64::INFINITY,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Ambient::Model { space } if space.curvature() == 0.0 => "minkowski",
            Ambient::Model { space } if space.curvature() < 0.0 => match space.ads_domain() {
                AdsDomain::GloballyHyperbolic => "ads",
                AdsDomain::Full => "ads-full",
            },
            Ambient::Model { .. } => "desitter",
            Ambient::Cylinder { .. } => "cylinder",
        }
    }

    /// Curvature for model ambients, circumference for the cylinder.
    pub fn parameter(&self) -> f64 {
        match self {
            Ambient::Model { space } => space.curvature(),
            Ambient::Cylinder { circumference } => *circumference,
        }
    }

    pub fn from_kind(kind: &str, parameter: f64) -> Option<Self> {
        Some(match kind {
            "minkowski" => Ambient::model(ModelSpace::minkowski()),
            "ads" if parameter < 0.0 => Ambient::model(ModelSpace::new(parameter)),
            "ads-full" if parameter < 0.0 => {
                Ambient::model(ModelSpace::new(parameter).with_ads_domain(AdsDomain::Full))
            }
            "desitter" if parameter > 0.0 => Ambient::model(ModelSpace::new(parameter)),
            "cylinder" if parameter > 0.0 => Ambient::cylinder(parameter),
            _ => return None,
        })
    }
}

/// How the causal order of a new space is specified.
#[derive(Debug, Clone)]
pub enum Relation {
    /// Pairs `(i, j)` with `i ≤ j`; the transitive closure is taken.
    Pairs(Vec<(usize, usize)>),
    /// Computed from ambient coordinates.
    Ambient,
}

/// How the time separation of a new space is specified.
#[derive(Debug, Clone)]
pub enum TauSource {
    /// Evaluated from ambient coordinates on every causal pair.
    Ambient,
    /// Explicit `(i, j, τ)` entries; all others are zero.
    Explicit(Vec<(usize, usize, f64)>),
}

#[derive(Debug, Clone)]
enum TauStore {
    Dense { causal: FixedBitSet, tau: Vec<f64> },
    Sparse { tau: Vec<Vec<f64>> },
}

/// Finite Lorentzian pre-length space.
#[derive(Debug, Clone)]
pub struct DiscreteSpace {
    coords: Vec<Option<ModelPoint>>,
    ambient: Option<Ambient>,
    provenance: Provenance,
    /// Strict causal future of each point, sorted by index.
    future: Vec<Vec<u32>>,
    links: Vec<Vec<u32>>,
    link_past: Vec<Vec<u32>>,
    topo: Option<Vec<u32>>,
    store: TauStore,
    /// Positive `τ` entries on pairs that are not causally related.
    strays: BTreeMap<(u32, u32), f64>,
}

impl DiscreteSpace {
    pub fn empty() -> Self {
        Self::build(
            Vec::new(),
            None,
            Provenance::Explicit,
            Relation::Pairs(Vec::new()),
            TauSource::Explicit(Vec::new()),
        )
        .expect("empty space is valid")
    }

    /// Sample of an ambient spacetime with inherited `τ`.
    pub fn from_ambient(points: Vec<ModelPoint>, ambient: Ambient) -> Result<Self, SpaceError> {
        Self::build(
            points.into_iter().map(Some).collect(),
            Some(ambient),
            Provenance::Inherited,
            Relation::Ambient,
            TauSource::Ambient,
        )
    }

    pub fn build(
        coords: Vec<Option<ModelPoint>>,
        ambient: Option<Ambient>,
        provenance: Provenance,
        relation: Relation,
        tau: TauSource,
    ) -> Result<Self, SpaceError> {
        let n = coords.len();
        if let Some(amb) = &ambient {
            for p in coords.iter().flatten() {
                amb.check_domain(*p)?;
            }
        }
        let check = |i: usize| {
            if i < n {
                Ok(i)
            } else {
                Err(SpaceError::IndexOutOfRange { index: i, len: n })
            }
        };
        let mut direct: Vec<Vec<u32>> = vec![Vec::new(); n];
        match &relation {
            Relation::Pairs(pairs) => {
                for &(i, j) in pairs {
                    check(i)?;
                    check(j)?;
                    if i != j {
                        direct[i].push(j as u32);
                    }
                }
            }
            Relation::Ambient => {
                let amb = ambient.as_ref().ok_or(SpaceError::NoAmbient)?;
                let pts = coords
                    .iter()
                    .enumerate()
                    .map(|(i, p)| p.ok_or(SpaceError::MissingCoordinates(i)))
                    .collect::<Result<Vec<_>, _>>()?;
                for i in 0..n {
                    for j in 0..n {
                        if i != j && amb.relation(pts[i], pts[j])?.is_causal() {
                            direct[i].push(j as u32);
                        }
                    }
                }
            }
        }
        for row in &mut direct {
            row.sort_unstable();
            row.dedup();
        }
        let future = match relation {
            Relation::Ambient => direct,
            Relation::Pairs(_) => transitive_closure(&direct),
        };
        let topo = topological_order(&future);
        let (links, link_past) = match &topo {
            Some(order) => transitive_reduction(&future, order),
            None => {
                let mut past = vec![Vec::new(); n];
                for (i, row) in future.iter().enumerate() {
                    for &j in row {
                        past[j as usize].push(i as u32);
                    }
                }
                (future.clone(), past)
            }
        };

        let mut space = DiscreteSpace {
            coords,
            ambient,
            provenance,
            store: if n < DENSE_LIMIT {
                let mut causal = FixedBitSet::with_capacity(n * n);
                for (i, row) in future.iter().enumerate() {
                    for &j in row {
                        causal.insert(i * n + j as usize);
                    }
                }
                TauStore::Dense {
                    causal,
                    tau: vec![0.0; n * n],
                }
            } else {
                TauStore::Sparse {
                    tau: future.iter().map(|r| vec![0.0; r.len()]).collect(),
                }
            },
            future,
            links,
            link_past,
            topo,
            strays: BTreeMap::new(),
        };

        match tau {
            TauSource::Ambient => {
                let amb = space.ambient.ok_or(SpaceError::NoAmbient)?;
                for i in 0..n {
                    let p = space.coords[i].ok_or(SpaceError::MissingCoordinates(i))?;
                    for k in 0..space.future[i].len() {
                        let j = space.future[i][k] as usize;
                        let q = space.coords[j].ok_or(SpaceError::MissingCoordinates(j))?;
                        let v = amb.tau(p, q)?;
                        space.set_tau(i, j, v)?;
                    }
                }
            }
            TauSource::Explicit(entries) => {
                for (i, j, v) in entries {
                    check(i)?;
                    check(j)?;
                    space.set_tau(i, j, v)?;
                }
            }
        }
        Ok(space)
    }

    fn set_tau(&mut self, i: usize, j: usize, v: f64) -> Result<(), SpaceError> {
        if v.is_nan() || v < 0.0 {
            return Err(SpaceError::InvalidTau { x: i, y: j, value: v });
        }
        let n = self.len();
        let causal = i != j && self.causal(i, j);
        if !causal {
            if v > 0.0 {
                self.strays.insert((i as u32, j as u32), v);
            } else {
                self.strays.remove(&(i as u32, j as u32));
            }
        }
        match &mut self.store {
            TauStore::Dense { tau, .. } => tau[i * n + j] = v,
            TauStore::Sparse { tau } => {
                if causal {
                    let k = self.future[i].binary_search(&(j as u32)).unwrap();
                    tau[i][k] = v;
                }
            }
        }
        Ok(())
    }

    /// Copy with the same order and a new `τ` on causal pairs.
    pub(crate) fn with_tau(&self, provenance: Provenance, mut value: impl FnMut(usize, usize) -> f64) -> Self {
        let mut out = self.clone();
        out.provenance = provenance;
        out.strays.clear();
        let n = self.len();
        match &mut out.store {
            TauStore::Dense { tau, .. } => tau.iter_mut().for_each(|v| *v = 0.0),
            TauStore::Sparse { .. } => {}
        }
        for i in 0..n {
            for k in 0..self.future[i].len() {
                let j = self.future[i][k] as usize;
                let v = value(i, j);
                match &mut out.store {
                    TauStore::Dense { tau, .. } => tau[i * n + j] = v,
                    TauStore::Sparse { tau } => tau[i][k] = v,
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.store, TauStore::Dense { .. })
    }

    pub fn coords(&self, i: usize) -> Option<ModelPoint> {
        self.coords[i]
    }

    pub fn ambient(&self) -> Option<&Ambient> {
        self.ambient.as_ref()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// `i ≤ j`, reflexive.
    pub fn causal(&self, i: usize, j: usize) -> bool {
        if i == j {
            return true;
        }
        match &self.store {
            TauStore::Dense { causal, .. } => causal.contains(i * self.len() + j),
            TauStore::Sparse { .. } => self.future[i].binary_search(&(j as u32)).is_ok(),
        }
    }

    /// `i ≪ j`, i.e. `τ(i, j) > 0`.
    pub fn timelike(&self, i: usize, j: usize) -> bool {
        self.tau(i, j) > 0.0
    }

    pub fn tau(&self, i: usize, j: usize) -> f64 {
        match &self.store {
            TauStore::Dense { tau, .. } => tau[i * self.len() + j],
            TauStore::Sparse { tau } => match self.future[i].binary_search(&(j as u32)) {
                Ok(k) => tau[i][k],
                Err(_) => self.strays.get(&(i as u32, j as u32)).copied().unwrap_or(0.0),
            },
        }
    }

    /// Strict causal future of `i`, sorted by index.
    pub fn future(&self, i: usize) -> &[u32] {
        &self.future[i]
    }

    /// Points linked to `i` from above (immediate causal successors).
    pub fn links(&self, i: usize) -> &[u32] {
        &self.links[i]
    }

    /// Points linked to `i` from below.
    pub fn link_past(&self, i: usize) -> &[u32] {
        &self.link_past[i]
    }

    pub fn link_count(&self) -> usize {
        self.links.iter().map(Vec::len).sum()
    }

    pub fn relation_count(&self) -> usize {
        self.future.iter().map(Vec::len).sum()
    }

    pub fn topological_order(&self) -> Option<&[u32]> {
        self.topo.as_deref()
    }

    pub(crate) fn strays(&self) -> &BTreeMap<(u32, u32), f64> {
        &self.strays
    }

    /// Every pair with `τ > 0`, in index order.
    pub fn tau_entries(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for &j in &self.future[i] {
                let v = self.tau(i, j as usize);
                if v > 0.0 {
                    out.push((i, j as usize, v));
                }
            }
        }
        out.extend(self.strays.iter().map(|(&(i, j), &v)| (i as usize, j as usize, v)));
        out.sort_by_key(|a| (a.0, a.1));
        out
    }

    /// Supremum of all finite `τ` values; zero for an antichain.
    pub fn finite_diameter(&self) -> f64 {
        self.finite_diameter_witness().map_or(0.0, |w| w.2)
    }

    /// Pair attaining [`DiscreteSpace::finite_diameter`], lowest indices first.
    pub fn finite_diameter_witness(&self) -> Option<(usize, usize, f64)> {
        let mut best: Option<(usize, usize, f64)> = None;
        for (i, j, v) in self.tau_entries() {
            if v.is_finite() && best.is_none_or(|b| v > b.2) {
                best = Some((i, j, v));
            }
        }
        best
    }

    /// Interior of the timelike diamond `I(p, q)`.
    pub fn diamond(&self, p: usize, q: usize) -> Vec<usize> {
        self.future[p]
            .iter()
            .map(|&w| w as usize)
            .filter(|&w| w != q && self.timelike(p, w) && self.timelike(w, q))
            .collect()
    }

    /// Causal diamond `J(p, q)` including both ends, sorted by index.
    pub fn causal_diamond(&self, p: usize, q: usize) -> Vec<usize> {
        if !self.causal(p, q) {
            return Vec::new();
        }
        let mut out: Vec<usize> = self.future[p]
            .iter()
            .map(|&w| w as usize)
            .filter(|&w| w != q && self.causal(w, q))
            .collect();
        out.push(p);
        out.push(q);
        out.sort_unstable();
        out
    }

    /// Background distance between two points, if both have coordinates.
    pub fn background_distance(&self, i: usize, j: usize) -> Option<f64> {
        let (p, q) = (self.coords[i]?, self.coords[j]?);
        Some(match &self.ambient {
            Some(a) => a.chart_distance(p, q),
            None => (q.time - p.time).hypot(q.space - p.space),
        })
    }
}

fn transitive_closure(direct: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let n = direct.len();
    let mut seen = FixedBitSet::with_capacity(n);
    let mut stack = Vec::new();
    (0..n)
        .map(|i| {
            seen.clear();
            stack.clear();
            stack.extend_from_slice(&direct[i]);
            while let Some(j) = stack.pop() {
                if !seen.put(j as usize) {
                    stack.extend_from_slice(&direct[j as usize]);
                }
            }
            seen.set(i, false);
            seen.ones().map(|j| j as u32).collect()
        })
        .collect()
}

fn topological_order(future: &[Vec<u32>]) -> Option<Vec<u32>> {
    let n = future.len();
    let mut indegree = vec![0usize; n];
    for row in future {
        for &j in row {
            indegree[j as usize] += 1;
        }
    }
    // Smallest index first among ready points keeps the order canonical.
    let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<u32>> = (0..n as u32)
        .filter(|&i| indegree[i as usize] == 0)
        .map(std::cmp::Reverse)
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(std::cmp::Reverse(i)) = ready.pop() {
        order.push(i);
        for &j in &future[i as usize] {
            indegree[j as usize] -= 1;
            if indegree[j as usize] == 0 {
                ready.push(std::cmp::Reverse(j));
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Links of a transitively closed acyclic relation. A successor `j` of `i`
/// is a link unless it lies in the future of an earlier link of `i`.
fn transitive_reduction(future: &[Vec<u32>], order: &[u32]) -> (Vec<Vec<u32>>, Vec<Vec<u32>>) {
    let n = future.len();
    let mut pos = vec![0usize; n];
    for (k, &i) in order.iter().enumerate() {
        pos[i as usize] = k;
    }
    let mut covered = FixedBitSet::with_capacity(n);
    let mut links = vec![Vec::new(); n];
    let mut past = vec![Vec::new(); n];
    let mut succ: Vec<u32> = Vec::new();
    for i in 0..n {
        succ.clear();
        succ.extend_from_slice(&future[i]);
        succ.sort_unstable_by_key(|&j| pos[j as usize]);
        covered.clear();
        for &j in &succ {
            if covered.contains(j as usize) {
                continue;
            }
            links[i].push(j);
            past[j as usize].push(i as u32);
            for &k in &future[j as usize] {
                covered.insert(k as usize);
            }
        }
        links[i].sort_unstable();
    }
    (links, past)
}
