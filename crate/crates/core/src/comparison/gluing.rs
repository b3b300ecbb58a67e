//! Splitting a triangle at a point on one of its sides.

use serde::{Deserialize, Serialize};

use super::triangle::{Comparator, Side, SideKind, SidePoint, Site, TimelikeTriangle};
use super::ComparisonError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GluingCase {
    /// Split point on the longest side, joined to the middle vertex.
    LongSide,
    /// Split point on a short side, joined to the opposite vertex.
    ShortSide,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Subdivision {
    pub case: GluingCase,
    pub split: Site,
    pub first: TimelikeTriangle,
    pub second: TimelikeTriangle,
    /// The split point lies in the past of `y`, so the sub-triangles list
    /// `y` before it.
    pub swapped: bool,
}

impl Comparator<'_> {
    /// Splits `t` at `p`. On the long side the pieces are `(x,p,y)` and
    /// `(p,y,z)`, or `(x,y,p)` and `(y,p,z)` when `y ≪ p`. On `xy` they are
    /// `(x,p,z)` and `(p,y,z)`; on `yz`, `(x,y,p)` and `(x,p,z)`.
    pub fn glue_subdivide(&self, t: &TimelikeTriangle, p: &SidePoint) -> Result<Subdivision, ComparisonError> {
        let split = t.site(p)?;
        let side = t.side(p.side);
        if p.index == 0 || p.index + 1 >= side.sites.len() {
            return Err(ComparisonError::PairOffTriangle(
                "split point must be interior to its side".into(),
            ));
        }
        let [x, y, z] = t.vertices;
        let tau = |a, b| self.site_tau(a, b);
        // In chain mode the pieces of a split side are kept as they are.
        let part = |kind: SideKind, from: usize, to: usize| -> Option<Side> {
            (!self.uses_ambient_sides()).then(|| side.slice(kind, from, to, tau(side.sites[from], side.sites[to])))
        };
        let whole = |kind: SideKind, of: SideKind| -> Option<Side> {
            (!self.uses_ambient_sides()).then(|| {
                let mut s = t.side(of).clone();
                s.kind = kind;
                s
            })
        };
        let last = side.sites.len() - 1;
        let i = p.index;
        use SideKind::*;
        let (case, swapped, first, second) = match p.side {
            Xz => {
                if tau(split, y) > 0.0 {
                    (
                        GluingCase::LongSide,
                        false,
                        self.build_triangle([x, split, y], [part(Xy, 0, i), None, whole(Xz, Xy)])?,
                        self.build_triangle([split, y, z], [None, whole(Yz, Yz), part(Xz, i, last)])?,
                    )
                } else if tau(y, split) > 0.0 {
                    (
                        GluingCase::LongSide,
                        true,
                        self.build_triangle([x, y, split], [whole(Xy, Xy), None, part(Xz, 0, i)])?,
                        self.build_triangle([y, split, z], [None, part(Yz, i, last), whole(Xz, Yz)])?,
                    )
                } else {
                    return Err(ComparisonError::NotTimelikeRelated(
                        "split point and y are not timelike related".into(),
                    ));
                }
            }
            Xy => (
                GluingCase::ShortSide,
                false,
                self.build_triangle([x, split, z], [part(Xy, 0, i), None, whole(Xz, Xz)])?,
                self.build_triangle([split, y, z], [part(Xy, i, last), whole(Yz, Yz), None])?,
            ),
            Yz => (
                GluingCase::ShortSide,
                false,
                self.build_triangle([x, y, split], [whole(Xy, Xy), part(Yz, 0, i), None])?,
                self.build_triangle([x, split, z], [None, part(Yz, i, last), whole(Xz, Xz)])?,
            ),
        };
        Ok(Subdivision {
            case,
            split,
            first,
            second,
            swapped,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comparison::{realize_triangle, Direction};
    use crate::generators::fixture;
    use crate::model::{ModelPoint, ModelSpace};
    use crate::space::{Ambient, DiscreteSpace};

    #[test]
    fn gluing_fixture_splits_into_the_expected_pieces() {
        let f = fixture("gluing-basic").unwrap();
        let c = Comparator::new(&f.space);
        assert!(!c.uses_ambient_sides());
        let (x, y, z, p) = (f.label("x"), f.label("y"), f.label("z"), f.label("p"));
        let t = c.triangle(x, y, z).unwrap();
        let xz = t.side(SideKind::Xz);
        let i = xz.sites.iter().position(|s| *s == Site::Sample(p)).unwrap();
        let sub = c.glue_subdivide(&t, &t.side_point(SideKind::Xz, i).unwrap()).unwrap();
        assert_eq!(sub.case, GluingCase::LongSide);
        assert!(!sub.swapped);
        assert_eq!(sub.first.sample_vertices(), Some([x, p, y]));
        assert_eq!(sub.second.sample_vertices(), Some([p, y, z]));
        for tri in [&sub.first, &sub.second] {
            for s in &tri.sides {
                assert!(s.gap.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn flat_midpoint_split_passes() {
        let sp = DiscreteSpace::from_ambient(
            vec![
                ModelPoint::new(0.0, 0.0),
                ModelPoint::new(3.0, 0.5),
                ModelPoint::new(4.0, 0.0),
            ],
            Ambient::model(ModelSpace::minkowski()),
        )
        .unwrap();
        let c = Comparator::new(&sp);
        let t = c.triangle(0, 1, 2).unwrap();
        let sub = c.glue_subdivide(&t, &t.snap(SideKind::Xz, 0.5)).unwrap();
        assert!(!sub.swapped);
        for tri in [&t, &sub.first, &sub.second] {
            let cfg = realize_triangle(0.0, tri).unwrap();
            let v = c
                .compare_triangle(0.0, Direction::Above, tri, &cfg, &c.side_pairs(tri, 0))
                .unwrap();
            assert!(v.pass);
        }
    }

    #[test]
    fn spacelike_split_is_rejected() {
        let sp = DiscreteSpace::from_ambient(
            vec![
                ModelPoint::new(0.0, 0.0),
                ModelPoint::new(2.0, 1.5),
                ModelPoint::new(4.0, 0.0),
            ],
            Ambient::model(ModelSpace::minkowski()),
        )
        .unwrap();
        let c = Comparator::new(&sp);
        let t = c.triangle(0, 1, 2).unwrap();
        assert!(matches!(
            c.glue_subdivide(&t, &t.snap(SideKind::Xz, 0.5)),
            Err(ComparisonError::NotTimelikeRelated(_))
        ));
        let sub = c.glue_subdivide(&t, &t.snap(SideKind::Xy, 0.5)).unwrap();
        assert_eq!(sub.case, GluingCase::ShortSide);
    }
}
