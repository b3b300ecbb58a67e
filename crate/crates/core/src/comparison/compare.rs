//! Triangle comparison over pairs of side points.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::realize::ComparisonConfiguration;
use super::triangle::{Comparator, SideKind, SidePoint, TimelikeTriangle};
use super::verdict::{ComparisonVerdict, Witness, WitnessPoint};
use super::{ComparisonError, Direction, Formulation};

/// Two side points of one triangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairSample {
    pub first: SidePoint,
    pub second: SidePoint,
}

impl Comparator<'_> {
    /// Pairs of sites on distinct sides, subsampled uniformly to the pair
    /// budget when there are more.
    pub fn side_pairs(&self, t: &TimelikeTriangle, seed: u64) -> Vec<PairSample> {
        let mut all = Vec::new();
        for (i, &s1) in SideKind::ALL.iter().enumerate() {
            for &s2 in &SideKind::ALL[i + 1..] {
                for first in t.side_points(s1) {
                    for second in t.side_points(s2) {
                        all.push(PairSample { first, second });
                    }
                }
            }
        }
        if all.len() <= self.pair_budget {
            return all;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut picked = index::sample(&mut rng, all.len(), self.pair_budget).into_vec();
        picked.sort_unstable();
        picked.into_iter().map(|i| all[i]).collect()
    }

    /// Compares `τ(p,q)` with `τ̄(p̄,q̄)` for each pair, in both orders.
    pub fn compare_triangle(
        &self,
        k: f64,
        direction: Direction,
        t: &TimelikeTriangle,
        cfg: &ComparisonConfiguration,
        pairs: &[PairSample],
    ) -> Result<ComparisonVerdict, ComparisonError> {
        let mut v = ComparisonVerdict::new(Formulation::Triangle, direction, k, self.tolerances.tau);
        v.triangles = 1;
        let req = v.requirement;
        for (n, pair) in pairs.iter().enumerate() {
            let (p, q) = (t.site(&pair.first)?, t.site(&pair.second)?);
            let (pb, qb) = (cfg.comparison_point(&pair.first)?, cfg.comparison_point(&pair.second)?);
            let forward = (self.site_tau(p, q), cfg.tau(pb, qb));
            let backward = (self.site_tau(q, p), cfg.tau(qb, pb));
            // Values within tolerance of zero count as unrelated.
            let tol = v.tolerance;
            let implication = |(tau, bar): (f64, f64)| match direction {
                Direction::Below => tau > tol && !(bar > 0.0),
                Direction::Above => bar > tol && !(tau > 0.0),
            };
            if implication(forward) || implication(backward) {
                v.implication_failures += 1;
            }
            let m_fwd = forward.0 - forward.1;
            let m_bwd = backward.0 - backward.1;
            let use_bwd = m_bwd.is_nan() || (!m_fwd.is_nan() && req.severity(m_bwd) > req.severity(m_fwd));
            let (a, b, values, margin) = if use_bwd {
                (pair.second, pair.first, backward, m_bwd)
            } else {
                (pair.first, pair.second, forward, m_fwd)
            };
            let point = |sp: SidePoint| -> Result<WitnessPoint, ComparisonError> {
                Ok(WitnessPoint {
                    side: Some(sp.side),
                    fraction: sp.fraction,
                    site: t.site(&sp)?,
                })
            };
            v.record(Witness {
                triangle: t.vertices,
                degenerate: t.degenerate,
                first: point(a)?,
                second: point(b)?,
                value: values.0,
                model_value: values.1,
                margin,
                order: n as u64,
            });
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comparison::Site;
    use crate::model::{ModelPoint, ModelSpace};
    use crate::space::{Ambient, DiscreteSpace};

    fn flat() -> DiscreteSpace {
        DiscreteSpace::from_ambient(
            vec![
                ModelPoint::new(0.0, 0.0),
                ModelPoint::new(1.2, 0.4),
                ModelPoint::new(3.0, -0.2),
            ],
            Ambient::model(ModelSpace::minkowski()),
        )
        .unwrap()
    }

    #[test]
    fn flat_self_comparison_is_exact() {
        let sp = flat();
        let c = Comparator::new(&sp);
        let t = c.triangle(0, 1, 2).unwrap();
        let cfg = super::super::realize_triangle(0.0, &t).unwrap();
        let pairs = c.side_pairs(&t, 3);
        assert_eq!(pairs.len(), 3 * 81);
        for dir in [Direction::Above, Direction::Below] {
            let v = c.compare_triangle(0.0, dir, &t, &cfg, &pairs).unwrap();
            assert!(v.pass, "{dir:?}: {:?}", v.worst_margin);
            // Null pairs turn rounding of order 1e-16 into τ̄ of order 1e-8.
            assert!(v.worst_margin.unwrap().abs() < 1e-7, "{:?}", v.witnesses[0]);
            assert_eq!(v.samples, pairs.len() as u64);
            assert_eq!(v.implication_failures, 0);
        }
    }

    #[test]
    fn same_side_pair_has_zero_margin() {
        let sp = flat();
        let c = Comparator::new(&sp);
        let t = c.triangle(0, 1, 2).unwrap();
        let cfg = super::super::realize_triangle(-1.0, &t).unwrap();
        let pair = PairSample {
            first: t.side_point(SideKind::Xz, 2).unwrap(),
            second: t.side_point(SideKind::Xz, 6).unwrap(),
        };
        let v = c.compare_triangle(-1.0, Direction::Below, &t, &cfg, &[pair]).unwrap();
        assert!(v.worst_margin.unwrap().abs() < 1e-12);
    }

    #[test]
    fn off_triangle_pair_is_error() {
        let sp = flat();
        let c = Comparator::new(&sp);
        let t = c.triangle(0, 1, 2).unwrap();
        let cfg = super::super::realize_triangle(0.0, &t).unwrap();
        let bad = PairSample {
            first: SidePoint {
                side: SideKind::Xy,
                index: 40,
                fraction: 0.5,
            },
            second: t.side_point(SideKind::Xz, 1).unwrap(),
        };
        assert!(matches!(
            c.compare_triangle(0.0, Direction::Above, &t, &cfg, &[bad]),
            Err(ComparisonError::PairOffTriangle(_))
        ));
    }

    #[test]
    fn budget_subsamples_deterministically() {
        let sp = flat();
        let c = Comparator::new(&sp).with_pair_budget(20);
        let t = c.triangle(0, 1, 2).unwrap();
        let a = c.side_pairs(&t, 5);
        assert_eq!(a.len(), 20);
        assert_eq!(a, c.side_pairs(&t, 5));
        assert!(matches!(
            t.site(&a[0].first).unwrap(),
            Site::Sample(_) | Site::Ambient(_)
        ));
    }
}
