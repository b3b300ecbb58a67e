use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::TriangleMargin;
use super::run::{evaluate_triangles, merge_outcomes, Slot};
use super::{derive_seed, streams, DiamondParams};
use crate::comparison::{
    Comparator, ComparisonVerdict, Direction, Formulation, Site, TimelikeTriangle, TriangleFilter,
};
use crate::space::DiscreteSpace;

const ATTEMPTS_PER_DIAMOND: usize = 50;

/// The hypothesis that geodesics vary continuously has no finite analogue;
/// this is what is checked instead.
pub const UNIQUENESS_SUBSTITUTION: &str =
    "continuous variation of geodesics replaced by a unique maximizing chain per sampled pair";

/// Timelike diamond `I(bottom, top)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diamond {
    pub bottom: usize,
    pub top: usize,
    pub interior: Vec<usize>,
}

/// Seeded sample of distinct diamonds with `τ(bottom, top)` at most
/// `max_tau` and enough interior points.
pub fn sample_diamonds(sp: &DiscreteSpace, params: &DiamondParams, seed: u64) -> Vec<Diamond> {
    let n = sp.len();
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    for _ in 0..params.count.saturating_mul(ATTEMPTS_PER_DIAMOND) {
        if out.len() == params.count {
            break;
        }
        let p = rng.random_range(0..n);
        let tops: Vec<usize> = sp
            .future(p)
            .iter()
            .map(|&q| q as usize)
            .filter(|&q| sp.timelike(p, q) && sp.tau(p, q) <= params.max_tau)
            .collect();
        if tops.is_empty() {
            continue;
        }
        let q = tops[rng.random_range(0..tops.len())];
        if !seen.insert((p, q)) {
            continue;
        }
        let interior = sp.diamond(p, q);
        if interior.len() >= params.min_interior {
            out.push(Diamond {
                bottom: p,
                top: q,
                interior,
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiamondVerdict {
    pub bottom: usize,
    pub top: usize,
    pub interior: usize,
    /// `None` when no triangle inside the diamond could be evaluated.
    pub verdict: Option<ComparisonVerdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniquenessProxy {
    pub substitution: String,
    /// Distinct timelike pairs among the side points of the global sample.
    pub pairs: u64,
    pub non_unique: u64,
    pub holds: bool,
    pub examples: Vec<[Site; 2]>,
}

fn site_key(s: Site) -> (u8, u64, u64) {
    match s {
        Site::Sample(i) => (0, i as u64, 0),
        Site::Ambient(p) => (1, p.time.to_bits(), p.space.to_bits()),
    }
}

impl UniquenessProxy {
    /// Counts pairs of side points, vertices included, with more than one
    /// maximizing geodesic.
    pub fn from_triangles(c: &Comparator, triangles: &[TimelikeTriangle]) -> Self {
        let mut seen = BTreeSet::new();
        let mut non_unique = 0;
        let mut examples = Vec::new();
        for t in triangles {
            let mut sites: Vec<Site> = Vec::new();
            for s in &t.sides {
                for &p in &s.sites {
                    if !sites.iter().any(|&q| site_key(q) == site_key(p)) {
                        sites.push(p);
                    }
                }
            }
            for &a in &sites {
                for &b in &sites {
                    if !seen.insert((site_key(a), site_key(b))) {
                        continue;
                    }
                    let Some(m) = c.pair_multiplicity(a, b) else {
                        seen.remove(&(site_key(a), site_key(b)));
                        continue;
                    };
                    if m != 1 {
                        non_unique += 1;
                        if examples.len() < 5 {
                            examples.push([a, b]);
                        }
                    }
                }
            }
        }
        Self {
            substitution: UNIQUENESS_SUBSTITUTION.to_string(),
            pairs: seen.len() as u64,
            non_unique,
            holds: non_unique == 0,
            examples,
        }
    }
}

/// Local verdicts on sampled diamonds paired with the global verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalGlobalReport {
    pub k: f64,
    pub direction: Direction,
    pub diamonds: Vec<DiamondVerdict>,
    pub local: Option<ComparisonVerdict>,
    pub global: Option<ComparisonVerdict>,
    pub local_pass: bool,
    pub global_pass: bool,
    pub uniqueness: UniquenessProxy,
    /// Bound above and unique maximizers: the globalization hypothesis is
    /// met at the discrete level.
    pub hypotheses_hold: bool,
    /// Not (hypotheses, local pass and global fail).
    pub implication_held: bool,
    /// A global pass comes with a local pass on every diamond.
    pub restriction_held: bool,
}

pub(crate) struct DiamondEval {
    /// One verdict per slot, `None` where nothing was evaluated.
    pub verdicts: Vec<Option<ComparisonVerdict>>,
    pub margins: Vec<TriangleMargin>,
}

/// Triangle verdicts per slot on each diamond, in diamond order.
pub(crate) fn evaluate_diamonds(
    c: &Comparator,
    diamonds: &[Diamond],
    slots: &[Slot],
    curvatures: &[f64],
    per_diamond: usize,
    seed: u64,
) -> Vec<DiamondEval> {
    diamonds
        .par_iter()
        .enumerate()
        .map(|(i, d)| {
            let filter = TriangleFilter::realizable_for(curvatures).within(d.interior.clone());
            let s = derive_seed(seed, i as u64);
            let tris = c.enumerate_triangles(&filter, per_diamond, s);
            let outcomes = evaluate_triangles(c, &tris, slots, derive_seed(s, streams::PAIRS));
            let (entries, margins) = merge_outcomes(c, slots, &tris, outcomes);
            DiamondEval {
                verdicts: entries.into_iter().map(|e| e.outcome.result().cloned()).collect(),
                margins,
            }
        })
        .collect()
}

pub(crate) fn assemble(
    k: f64,
    direction: Direction,
    diamonds: &[Diamond],
    local: Vec<Option<ComparisonVerdict>>,
    global: Option<ComparisonVerdict>,
    uniqueness: UniquenessProxy,
) -> LocalGlobalReport {
    let mut merged: Option<ComparisonVerdict> = None;
    let mut verdicts = Vec::new();
    for (d, v) in diamonds.iter().zip(local) {
        if let Some(v) = &v {
            match &mut merged {
                Some(m) => m.merge(v.clone()),
                None => merged = Some(v.clone()),
            }
        }
        verdicts.push(DiamondVerdict {
            bottom: d.bottom,
            top: d.top,
            interior: d.interior.len(),
            verdict: v,
        });
    }
    let local_pass = verdicts.iter().all(|d| d.verdict.as_ref().is_none_or(|v| v.pass));
    let global_pass = global.as_ref().is_none_or(|v| v.pass);
    let hypotheses_hold = direction == Direction::Above && uniqueness.holds;
    LocalGlobalReport {
        k,
        direction,
        diamonds: verdicts,
        local: merged,
        global,
        local_pass,
        global_pass,
        hypotheses_hold,
        implication_held: !(hypotheses_hold && local_pass && !global_pass),
        restriction_held: !global_pass || local_pass,
        uniqueness,
    }
}

/// Triangle checks inside sampled diamonds and on a global sample of
/// `global_budget` triangles, at one curvature and direction.
pub fn check_local_vs_global(
    c: &Comparator,
    k: f64,
    direction: Direction,
    params: &DiamondParams,
    global_budget: usize,
    seed: u64,
) -> LocalGlobalReport {
    let slots = [Slot {
        formulation: Formulation::Triangle,
        direction,
        k,
    }];
    let diamonds = sample_diamonds(c.space(), params, derive_seed(seed, streams::DIAMONDS));
    let local: Vec<Option<ComparisonVerdict>> = evaluate_diamonds(
        c,
        &diamonds,
        &slots,
        &[k],
        params.triangles_per_diamond,
        derive_seed(seed, streams::DIAMONDS + 100),
    )
    .into_iter()
    .map(|mut d| d.verdicts.remove(0))
    .collect();
    let tris = c.enumerate_triangles(
        &TriangleFilter::realizable_for(&[k]),
        global_budget,
        derive_seed(seed, streams::TRIANGLES),
    );
    let outcomes = evaluate_triangles(c, &tris, &slots, derive_seed(seed, streams::PAIRS));
    let (entries, _) = merge_outcomes(c, &slots, &tris, outcomes);
    let global = entries[0].outcome.result().cloned();
    assemble(
        k,
        direction,
        &diamonds,
        local,
        global,
        UniquenessProxy::from_triangles(c, &tris),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{sprinkle, Amount, Region, SprinkleSpec};
    use crate::model::ModelSpace;
    use crate::space::Ambient;

    fn minkowski(count: usize, seed: u64) -> DiscreteSpace {
        sprinkle(&SprinkleSpec::new(
            Ambient::model(ModelSpace::minkowski()),
            Region::diamond((0.0, 0.0), (4.0, 0.0)),
            Amount::Count(count),
            seed,
        ))
        .unwrap()
    }

    #[test]
    fn diamonds_respect_parameters() {
        let sp = minkowski(300, 4);
        let params = DiamondParams {
            count: 5,
            max_tau: 1.5,
            min_interior: 8,
            triangles_per_diamond: 4,
        };
        let ds = sample_diamonds(&sp, &params, 9);
        assert_eq!(ds.len(), 5);
        for d in &ds {
            assert!(sp.tau(d.bottom, d.top) <= 1.5);
            assert!(d.interior.len() >= 8);
        }
        assert_eq!(ds, sample_diamonds(&sp, &params, 9));
    }

    #[test]
    fn minkowski_passes_locally_and_globally() {
        let sp = minkowski(300, 6);
        let c = Comparator::new(&sp);
        let params = DiamondParams {
            count: 4,
            triangles_per_diamond: 8,
            ..DiamondParams::default()
        };
        let r = check_local_vs_global(&c, 0.0, Direction::Above, &params, 40, 1);
        assert!(r.local_pass && r.global_pass);
        assert!(r.implication_held && r.restriction_held);
        assert!(r.uniqueness.holds);
        assert!(r.diamonds.iter().all(|d| d.verdict.is_some()));
    }

    #[test]
    fn whole_space_diamond_matches_global() {
        let sp = minkowski(60, 2);
        let c = Comparator::new(&sp);
        let (p, q) = (0, sp.len() - 1);
        assert!(sp.timelike(p, q));
        let d = Diamond {
            bottom: p,
            top: q,
            interior: (0..sp.len()).collect(),
        };
        let slots = [Slot {
            formulation: Formulation::Triangle,
            direction: Direction::Below,
            k: 0.0,
        }];
        let local = evaluate_diamonds(&c, &[d], &slots, &[0.0], 30, 5);
        let again = c.enumerate_triangles(
            &TriangleFilter::realizable_for(&[0.0]).within((0..sp.len()).collect()),
            30,
            derive_seed(5, 0),
        );
        assert_eq!(local[0].margins.len(), again.len());
        let outcomes = evaluate_triangles(&c, &again, &slots, derive_seed(derive_seed(5, 0), streams::PAIRS));
        let (entries, _) = merge_outcomes(&c, &slots, &again, outcomes);
        assert_eq!(local[0].verdicts[0].as_ref(), entries[0].outcome.result());
    }
}
