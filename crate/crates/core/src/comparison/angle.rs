//! Hinges, measured angles and the angle-based formulations.

use serde::{Deserialize, Serialize};

use super::triangle::{Comparator, GeodesicPath, Side, SideKind, Site, TimelikeTriangle};
use super::verdict::{ComparisonVerdict, Witness, WitnessPoint};
use super::{ComparisonError, Direction, Formulation};
use crate::model::{HingeOrientation, ModelSpace, TriangleSides, VertexRole};

/// Ratio between consecutive levels of the shrink schedule.
pub const SHRINK_FACTOR: f64 = 0.5;
pub const SHRINK_LEVELS: usize = 6;

/// Ratios `t/s` tried for legs of the same time orientation. Two future
/// legs at hyperbolic angle `ω` give timelike related endpoints only when
/// the ratio is below `e^{-ω}` (or above `e^{ω}`).
const SAME_ORIENTATION_RATIOS: [f64; 3] = [0.25, 1.0 / 16.0, 1.0 / 64.0];

/// A geodesic leaving a vertex, parameterized by `τ`-arclength fraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Leg {
    /// Sites from the vertex (index 0) to the far end.
    pub sites: Vec<Site>,
    /// Parameter of each site, from 0 at the vertex to 1.
    pub params: Vec<f64>,
    pub length: f64,
    pub future_directed: bool,
    /// Triangle side the leg runs along, if any.
    pub side: Option<SideKind>,
    /// Ambient path of the underlying side and whether the leg runs along
    /// it backwards.
    path: Option<(GeodesicPath, bool)>,
}

impl Leg {
    /// Leg along `side`, leaving from its last site when `reversed`.
    pub fn from_side(side: &Side, reversed: bool) -> Leg {
        let (sites, params) = if reversed {
            (
                side.sites.iter().rev().copied().collect(),
                side.fractions.iter().rev().map(|f| 1.0 - f).collect(),
            )
        } else {
            (side.sites.clone(), side.fractions.clone())
        };
        Leg {
            sites,
            params,
            length: side.length,
            future_directed: !reversed,
            side: Some(side.kind),
            path: side.path.map(|p| (p, reversed)),
        }
    }

    pub fn vertex(&self) -> Site {
        self.sites[0]
    }

    pub fn end(&self) -> Site {
        *self.sites.last().unwrap()
    }

    /// The leg can be evaluated at any parameter, not just at its sites.
    pub fn is_continuous(&self) -> bool {
        self.path.is_some()
    }
}

/// Two legs from a common vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hinge {
    pub vertex: Site,
    pub alpha: Leg,
    pub beta: Leg,
    /// Whether the triangle the hinge was taken from is degenerate.
    pub degenerate: bool,
}

impl Hinge {
    pub fn orientation(&self) -> HingeOrientation {
        if self.alpha.future_directed == self.beta.future_directed {
            HingeOrientation::Same
        } else {
            HingeOrientation::Mixed
        }
    }

    /// Role of the vertex in the triangles formed with points on the legs.
    pub fn role(&self) -> VertexRole {
        match (self.alpha.future_directed, self.beta.future_directed) {
            (true, true) => VertexRole::Past,
            (false, false) => VertexRole::Future,
            _ => VertexRole::Middle,
        }
    }

    fn witness_triangle(&self) -> [Site; 3] {
        [self.vertex, self.alpha.end(), self.beta.end()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleLevel {
    pub s: f64,
    pub t: f64,
    pub angle: f64,
}

/// Extrapolated angle between the legs of a hinge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleMeasurement {
    /// Unsigned hyperbolic angle.
    pub angle: f64,
    /// Angle times the orientation sign (`-1` for legs of the same time
    /// orientation).
    pub signed: f64,
    pub orientation: HingeOrientation,
    /// Difference between the extrapolations with and without the finest
    /// level.
    pub delta: f64,
    pub levels: Vec<AngleLevel>,
}

impl AngleMeasurement {
    pub fn s_range(&self) -> (f64, f64) {
        range(self.levels.iter().map(|l| l.s))
    }

    pub fn t_range(&self) -> (f64, f64) {
        range(self.levels.iter().map(|l| l.t))
    }
}

fn range(it: impl Iterator<Item = f64>) -> (f64, f64) {
    it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Value at `x = 0` of the polynomial through `(xs[i], ys[i])`.
pub(crate) fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p = ys.to_vec();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            let (xi, xj) = (xs[i], xs[i + m]);
            p[i] = (xi * p[i + 1] - xj * p[i]) / (xi - xj);
        }
    }
    p[0]
}

impl Comparator<'_> {
    /// Hinge at one vertex of a triangle, with legs along the two sides
    /// meeting there.
    pub fn hinge_at(&self, t: &TimelikeTriangle, role: VertexRole) -> Hinge {
        let (alpha, beta) = match role {
            VertexRole::Past => (
                Leg::from_side(t.side(SideKind::Xy), false),
                Leg::from_side(t.side(SideKind::Xz), false),
            ),
            VertexRole::Middle => (
                Leg::from_side(t.side(SideKind::Xy), true),
                Leg::from_side(t.side(SideKind::Yz), false),
            ),
            VertexRole::Future => (
                Leg::from_side(t.side(SideKind::Yz), true),
                Leg::from_side(t.side(SideKind::Xz), true),
            ),
        };
        Hinge {
            vertex: alpha.vertex(),
            alpha,
            beta,
            degenerate: t.degenerate,
        }
    }

    /// Leg from `vertex` to `end`, in whichever time direction relates them.
    pub fn leg(&self, vertex: Site, end: Site) -> Result<Leg, ComparisonError> {
        if self.site_tau(vertex, end) > 0.0 {
            Ok(Leg::from_side(&self.side_between(SideKind::Xy, vertex, end)?, false))
        } else if self.site_tau(end, vertex) > 0.0 {
            Ok(Leg::from_side(&self.side_between(SideKind::Xy, end, vertex)?, true))
        } else {
            Err(ComparisonError::NotTimelikeRelated(
                "hinge leg endpoints are not timelike related".into(),
            ))
        }
    }

    pub fn hinge(&self, vertex: Site, alpha_end: Site, beta_end: Site) -> Result<Hinge, ComparisonError> {
        let mut alpha = self.leg(vertex, alpha_end)?;
        let mut beta = self.leg(vertex, beta_end)?;
        alpha.side = None;
        beta.side = None;
        Ok(Hinge {
            vertex,
            alpha,
            beta,
            degenerate: false,
        })
    }

    fn leg_point(&self, leg: &Leg, s: f64) -> Result<Site, ComparisonError> {
        if s <= 0.0 {
            return Ok(leg.vertex());
        }
        if s >= 1.0 {
            return Ok(leg.end());
        }
        match &leg.path {
            Some((p, reversed)) => self.path_point(p, if *reversed { 1.0 - s } else { s }),
            None => {
                let i = (0..leg.params.len())
                    .min_by(|&i, &j| (leg.params[i] - s).abs().total_cmp(&(leg.params[j] - s).abs()))
                    .unwrap();
                Ok(leg.sites[i])
            }
        }
    }

    /// Side lengths and vertex role of the triangle formed by the hinge
    /// vertex and one point on each leg, if they form a timelike triangle.
    fn hinge_triangle(&self, h: &Hinge, p: Site, q: Site) -> Option<(TriangleSides, VertexRole)> {
        let v = h.vertex;
        let tau = |a, b| self.site_tau(a, b);
        let (sides, role) = match h.role() {
            VertexRole::Middle => {
                let (past, fut) = if h.alpha.future_directed { (q, p) } else { (p, q) };
                (
                    TriangleSides::new(tau(past, v), tau(v, fut), tau(past, fut)),
                    VertexRole::Middle,
                )
            }
            VertexRole::Past => {
                let (near, far) = if tau(p, q) > 0.0 {
                    (p, q)
                } else if tau(q, p) > 0.0 {
                    (q, p)
                } else {
                    return None;
                };
                (
                    TriangleSides::new(tau(v, near), tau(near, far), tau(v, far)),
                    VertexRole::Past,
                )
            }
            VertexRole::Future => {
                let (early, late) = if tau(p, q) > 0.0 {
                    (p, q)
                } else if tau(q, p) > 0.0 {
                    (q, p)
                } else {
                    return None;
                };
                (
                    TriangleSides::new(tau(early, late), tau(late, v), tau(early, v)),
                    VertexRole::Future,
                )
            }
        };
        let ok = [sides.a, sides.b, sides.c].iter().all(|s| *s > 0.0 && s.is_finite());
        ok.then_some((sides, role))
    }

    /// Signed comparison angle at the hinge vertex for one point on each leg.
    fn signed_angle(&self, model: &ModelSpace, h: &Hinge, p: Site, q: Site) -> Option<f64> {
        let (sides, role) = self.hinge_triangle(h, p, q)?;
        model.signed_comparison_angle(sides, role).ok()
    }

    fn unsigned_angle_at(&self, h: &Hinge, s: f64, t: f64) -> Result<Option<f64>, ComparisonError> {
        let (p, q) = (self.leg_point(&h.alpha, s)?, self.leg_point(&h.beta, t)?);
        let (sides, role) = match self.hinge_triangle(h, p, q) {
            Some(x) => x,
            None => return Ok(None),
        };
        Ok(ModelSpace::minkowski().comparison_angle(sides, role).ok())
    }

    /// Limit of flat comparison angles as both legs shrink, extrapolated in
    /// the squared scale over a geometric schedule.
    pub fn measure_angle(&self, h: &Hinge) -> Result<AngleMeasurement, ComparisonError> {
        let levels = if h.alpha.is_continuous() && h.beta.is_continuous() {
            self.continuous_levels(h)?
        } else {
            self.discrete_levels(h)?
        };
        if levels.len() < 2 {
            return Err(ComparisonError::AngleUndefined(format!(
                "{} admissible shrink levels",
                levels.len()
            )));
        }
        let xs: Vec<f64> = levels.iter().map(|l| l.s * l.s + l.t * l.t).collect();
        let ys: Vec<f64> = levels.iter().map(|l| l.angle).collect();
        let n = levels.len();
        let all = extrapolate_to_zero(&xs, &ys);
        let coarser = extrapolate_to_zero(&xs[..n - 1], &ys[..n - 1]);
        let delta = (all - coarser).abs();
        if !(delta <= self.tolerances.angle) {
            return Err(ComparisonError::NonConvergent {
                delta,
                tolerance: self.tolerances.angle,
            });
        }
        let angle = all.max(0.0);
        let orientation = h.orientation();
        Ok(AngleMeasurement {
            angle,
            signed: orientation.sign() * angle,
            orientation,
            delta,
            levels,
        })
    }

    fn continuous_levels(&self, h: &Hinge) -> Result<Vec<AngleLevel>, ComparisonError> {
        let candidates: Vec<(f64, bool)> = match h.orientation() {
            HingeOrientation::Mixed => vec![(1.0, false)],
            HingeOrientation::Same => SAME_ORIENTATION_RATIOS
                .iter()
                .flat_map(|&r| [(r, false), (r, true)])
                .collect(),
        };
        let mut best: Vec<AngleLevel> = Vec::new();
        for (ratio, swap) in candidates {
            let mut levels = Vec::new();
            for k in 0..SHRINK_LEVELS {
                let big = SHRINK_FACTOR.powi(k as i32);
                let small = ratio * big;
                let (s, t) = if swap { (small, big) } else { (big, small) };
                if let Some(angle) = self.unsigned_angle_at(h, s, t)? {
                    levels.push(AngleLevel { s, t, angle });
                }
            }
            if levels.len() > best.len() {
                best = levels;
            }
            if best.len() == SHRINK_LEVELS {
                break;
            }
        }
        Ok(best)
    }

    /// Levels from the sites of discrete legs: the largest admissible pair
    /// first, then each next pair at most half the previous scale.
    fn discrete_levels(&self, h: &Hinge) -> Result<Vec<AngleLevel>, ComparisonError> {
        let flat = ModelSpace::minkowski();
        let mut all = Vec::new();
        for (i, &s) in h.alpha.params.iter().enumerate().skip(1) {
            for (j, &t) in h.beta.params.iter().enumerate().skip(1) {
                if let Some((sides, role)) = self.hinge_triangle(h, h.alpha.sites[i], h.beta.sites[j]) {
                    if let Ok(angle) = flat.comparison_angle(sides, role) {
                        all.push(AngleLevel { s, t, angle });
                    }
                }
            }
        }
        let scale = |l: &AngleLevel| l.s.max(l.t);
        all.sort_by(|a, b| scale(b).total_cmp(&scale(a)).then(a.s.total_cmp(&b.s)));
        let mut out: Vec<AngleLevel> = Vec::new();
        for l in all {
            if out.len() == SHRINK_LEVELS {
                break;
            }
            if out.last().is_none_or(|p| scale(&l) <= SHRINK_FACTOR * scale(p) + 1e-12) {
                out.push(l);
            }
        }
        Ok(out)
    }

    /// Signed comparison angles at curvature `k` over the site grid of the
    /// two legs, `None` where the points do not form a realizable triangle.
    fn angle_grid(&self, k: f64, h: &Hinge) -> Vec<Vec<Option<f64>>> {
        let model = ModelSpace::new(k);
        h.alpha.sites[1..]
            .iter()
            .map(|&p| {
                h.beta.sites[1..]
                    .iter()
                    .map(|&q| self.signed_angle(&model, h, p, q))
                    .collect()
            })
            .collect()
    }

    fn grid_point(h: &Hinge, i: usize, j: usize) -> (WitnessPoint, WitnessPoint) {
        (
            WitnessPoint {
                side: h.alpha.side,
                fraction: h.alpha.params[i + 1],
                site: h.alpha.sites[i + 1],
            },
            WitnessPoint {
                side: h.beta.side,
                fraction: h.beta.params[j + 1],
                site: h.beta.sites[j + 1],
            },
        )
    }

    /// Checks that the signed comparison angle grows (bound below) or
    /// shrinks (bound above) in each leg parameter.
    pub fn compare_monotonicity(
        &self,
        k: f64,
        direction: Direction,
        h: &Hinge,
    ) -> Result<ComparisonVerdict, ComparisonError> {
        let grid = self.angle_grid(k, h);
        let rows = (0..grid.len()).filter(|&i| grid[i].iter().any(Option::is_some)).count();
        let cols = (0..grid.first().map_or(0, Vec::len))
            .filter(|&j| grid.iter().any(|r| r[j].is_some()))
            .count();
        if rows < 2 || cols < 2 {
            return Err(ComparisonError::InsufficientSamples(format!(
                "{rows} x {cols} admissible grid points"
            )));
        }
        let mut v = ComparisonVerdict::new(Formulation::Monotonicity, direction, k, self.tolerances.angle);
        v.triangles = 1;
        let mut n = 0u64;
        let mut record = |v: &mut ComparisonVerdict, earlier: f64, (i, j): (usize, usize), later: f64| {
            let (first, second) = Self::grid_point(h, i, j);
            v.record(Witness {
                triangle: h.witness_triangle(),
                degenerate: h.degenerate,
                first,
                second,
                value: later,
                model_value: earlier,
                margin: later - earlier,
                order: n,
            });
            n += 1;
        };
        for (i, row) in grid.iter().enumerate() {
            let mut prev: Option<f64> = None;
            for (j, cell) in row.iter().enumerate() {
                if let Some(a) = *cell {
                    if let Some(p) = prev {
                        record(&mut v, p, (i, j), a);
                    }
                    prev = Some(a);
                }
            }
        }
        for j in 0..grid[0].len() {
            let mut prev: Option<f64> = None;
            for (i, row) in grid.iter().enumerate() {
                if let Some(a) = row[j] {
                    if let Some(p) = prev {
                        record(&mut v, p, (i, j), a);
                    }
                    prev = Some(a);
                }
            }
        }
        Ok(v)
    }

    /// Compares the measured signed angle with every signed comparison angle
    /// on the site grid.
    pub fn compare_angle(
        &self,
        k: f64,
        direction: Direction,
        h: &Hinge,
        measured: &AngleMeasurement,
    ) -> Result<ComparisonVerdict, ComparisonError> {
        let grid = self.angle_grid(k, h);
        let mut v = ComparisonVerdict::new(Formulation::Angle, direction, k, self.tolerances.angle);
        v.triangles = 1;
        let mut n = 0;
        for (i, row) in grid.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                if let Some(a) = a {
                    let (first, second) = Self::grid_point(h, i, j);
                    v.record(Witness {
                        triangle: h.witness_triangle(),
                        degenerate: h.degenerate,
                        first,
                        second,
                        value: measured.signed,
                        model_value: *a,
                        margin: measured.signed - a,
                        order: n,
                    });
                    n += 1;
                }
            }
        }
        if v.samples == 0 {
            return Err(ComparisonError::InsufficientSamples("no admissible grid points".into()));
        }
        Ok(v)
    }

    /// Compares `τ(α(1), β(1))` with the opposite side of the comparison
    /// hinge built from the leg lengths and the measured angle.
    pub fn compare_hinge(
        &self,
        k: f64,
        direction: Direction,
        h: &Hinge,
        measured: &AngleMeasurement,
    ) -> Result<ComparisonVerdict, ComparisonError> {
        let mut v = ComparisonVerdict::new(Formulation::Hinge, direction, k, self.tolerances.tau);
        v.triangles = 1;
        let (p, q) = (h.alpha.end(), h.beta.end());
        let tau = match h.orientation() {
            HingeOrientation::Mixed if h.alpha.future_directed => self.site_tau(q, p),
            HingeOrientation::Mixed => self.site_tau(p, q),
            HingeOrientation::Same => self.site_tau(p, q).max(self.site_tau(q, p)),
        };
        let model = ModelSpace::new(k);
        let bar = match model.law_of_cosines(h.alpha.length, h.beta.length, measured.angle, h.orientation()) {
            Ok(b) => b,
            Err(_) => {
                v.skipped = 1;
                return Ok(v);
            }
        };
        let end = |leg: &super::Leg| WitnessPoint {
            side: leg.side,
            fraction: 1.0,
            site: leg.end(),
        };
        v.record(Witness {
            triangle: h.witness_triangle(),
            degenerate: h.degenerate,
            first: end(&h.alpha),
            second: end(&h.beta),
            value: tau,
            model_value: bar,
            margin: tau - bar,
            order: 0,
        });
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelPoint;
    use crate::space::{Ambient, DiscreteSpace};

    fn space(ambient: Ambient, pts: &[(f64, f64)]) -> DiscreteSpace {
        DiscreteSpace::from_ambient(pts.iter().map(|&(t, x)| ModelPoint::new(t, x)).collect(), ambient).unwrap()
    }

    #[test]
    fn neville_recovers_polynomials() {
        let xs = [1.0, 0.25, 0.0625];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 2.0 * x + 0.5 * x * x).collect();
        assert!((extrapolate_to_zero(&xs, &ys) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn flat_hinge_angle_is_exact() {
        let flat = Ambient::model(ModelSpace::minkowski());
        let sp = space(flat, &[(0.0, 0.0), (1.2, 0.4), (3.0, -0.2)]);
        let c = Comparator::new(&sp);
        let t = c.triangle(0, 1, 2).unwrap();
        for role in [VertexRole::Past, VertexRole::Middle, VertexRole::Future] {
            let h = c.hinge_at(&t, role);
            let m = c.measure_angle(&h).unwrap();
            let exact = ModelSpace::minkowski().comparison_angle(t.lengths, role).unwrap();
            assert!((m.angle - exact).abs() < 1e-9, "{role:?}: {} vs {exact}", m.angle);
            assert_eq!(m.levels.len(), SHRINK_LEVELS);
            assert_eq!(m.signed, role.sign() * m.angle);
            for dir in [Direction::Above, Direction::Below] {
                let mono = c.compare_monotonicity(0.0, dir, &h).unwrap();
                assert!(mono.pass && mono.worst_margin.unwrap().abs() < 1e-9);
                let hv = c.compare_hinge(0.0, dir, &h, &m).unwrap();
                assert!(
                    hv.pass && hv.worst_margin.unwrap().abs() < 1e-9,
                    "{:?}",
                    hv.worst_margin
                );
                let av = c.compare_angle(0.0, dir, &h, &m).unwrap();
                assert!(av.pass);
            }
        }
    }

    #[test]
    fn collinear_legs_have_zero_angle() {
        let flat = Ambient::model(ModelSpace::minkowski());
        let sp = space(flat, &[(0.0, 0.0), (1.0, 0.1), (2.0, 0.2)]);
        let c = Comparator::new(&sp);
        let h = c.hinge(Site::Sample(1), Site::Sample(0), Site::Sample(2)).unwrap();
        assert_eq!(h.orientation(), HingeOrientation::Mixed);
        let m = c.measure_angle(&h).unwrap();
        assert!(m.angle.abs() < 1e-7);
    }

    #[test]
    fn ads_equal_angles_along_geodesic() {
        let ads = ModelSpace::new(-1.0);
        let a = ads.point_on_axis(-0.6).unwrap();
        let b = ads.point_on_axis(0.9).unwrap();
        let y = ads.point_from_origin(0.7, 0.8).unwrap();
        let sp = DiscreteSpace::from_ambient(vec![a, ModelPoint::ORIGIN, y, b], Ambient::model(ads)).unwrap();
        let c = Comparator::new(&sp);
        let minus = c
            .measure_angle(&c.hinge(Site::Sample(1), Site::Sample(0), Site::Sample(2)).unwrap())
            .unwrap();
        let plus = c
            .measure_angle(&c.hinge(Site::Sample(1), Site::Sample(3), Site::Sample(2)).unwrap())
            .unwrap();
        assert!((minus.angle - 0.8).abs() < 1e-6, "{}", minus.angle);
        assert!((plus.angle - 0.8).abs() < 1e-6, "{}", plus.angle);
    }
}
