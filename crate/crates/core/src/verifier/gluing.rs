//! Random flat triangles split at a side point, checking that two passing
//! pieces glue to a passing whole.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::derive_seed;
use crate::comparison::{
    realize_triangle, Comparator, ComparisonError, Direction, GluingCase, SideKind, SidePoint, TimelikeTriangle,
};
use crate::model::{ModelPoint, ModelSpace};
use crate::space::{Ambient, DiscreteSpace};

const EXAMPLE_LIMIT: usize = 5;

/// Tally of one gluing case at one curvature.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CaseTally {
    /// Subdivisions whose three triangles could all be realized.
    pub evaluated: u64,
    pub both_pieces_pass: u64,
    pub whole_passes: u64,
    /// Both pieces pass and the whole fails.
    pub counterexamples: u64,
    pub examples: Vec<[ModelPoint; 3]>,
}

impl CaseTally {
    fn add(&mut self, pieces: bool, whole: bool, vertices: [ModelPoint; 3]) {
        self.evaluated += 1;
        self.both_pieces_pass += pieces as u64;
        self.whole_passes += whole as u64;
        if pieces && !whole {
            self.counterexamples += 1;
            if self.examples.len() < EXAMPLE_LIMIT {
                self.examples.push(vertices);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GluingTally {
    pub k: f64,
    pub long_side: CaseTally,
    pub short_side: CaseTally,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GluingReport {
    pub direction: Direction,
    pub triangles: usize,
    /// Triangles for which no admissible split point was found.
    pub unsplit: u64,
    pub tallies: Vec<GluingTally>,
    pub counterexamples: u64,
}

/// One split of a flat triangle with the verdicts of its pieces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GluingTrial {
    pub vertices: [ModelPoint; 3],
    pub case: GluingCase,
    pub split: SidePoint,
    /// `(first piece, second piece, whole)` per curvature; `None` where a
    /// triangle is not realizable.
    pub passes: Vec<Option<(bool, bool, bool)>>,
}

/// Random triangle `x ≪ y ≪ z` in Minkowski space with short sides in
/// `[0.3, 1.2]` and rapidities in `[-1, 1]`.
pub fn random_flat_triangle(rng: &mut impl Rng) -> [ModelPoint; 3] {
    let step = |from: ModelPoint, rng: &mut dyn rand::RngCore| {
        let len = rng.random_range(0.3..1.2);
        let w: f64 = rng.random_range(-1.0..1.0);
        ModelPoint::new(from.time + len * w.cosh(), from.space + len * w.sinh())
    };
    let x = ModelPoint::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let y = step(x, rng);
    let z = step(y, rng);
    [x, y, z]
}

fn split_point(c: &Comparator, t: &TimelikeTriangle, case: GluingCase, rng: &mut impl Rng) -> Option<SidePoint> {
    let interior = |side: SideKind| {
        let n = t.side(side).sites.len();
        (1..n.saturating_sub(1)).filter_map(move |i| t.side_point(side, i).ok())
    };
    let candidates: Vec<SidePoint> = match case {
        GluingCase::LongSide => {
            let y = t.y();
            interior(SideKind::Xz)
                .filter(|p| {
                    let s = t.site(p).unwrap();
                    c.site_tau(s, y) > 0.0 || c.site_tau(y, s) > 0.0
                })
                .collect()
        }
        GluingCase::ShortSide => interior(SideKind::Xy).chain(interior(SideKind::Yz)).collect(),
    };
    (!candidates.is_empty()).then(|| candidates[rng.random_range(0..candidates.len())])
}

fn passes(c: &Comparator, k: f64, direction: Direction, t: &TimelikeTriangle, seed: u64) -> Option<bool> {
    let cfg = realize_triangle(k, t).ok()?;
    let pairs = c.side_pairs(t, seed);
    c.compare_triangle(k, direction, t, &cfg, &pairs).ok().map(|v| v.pass)
}

/// Splits `vertices` per `case` and evaluates the pieces and the whole.
pub fn gluing_trial(
    vertices: [ModelPoint; 3],
    case: GluingCase,
    curvatures: &[f64],
    direction: Direction,
    seed: u64,
) -> Result<Option<GluingTrial>, ComparisonError> {
    let sp = DiscreteSpace::from_ambient(vertices.to_vec(), Ambient::model(ModelSpace::minkowski()))?;
    let c = Comparator::new(&sp);
    let whole = c.triangle(0, 1, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let Some(split) = split_point(&c, &whole, case, &mut rng) else {
        return Ok(None);
    };
    let sub = c.glue_subdivide(&whole, &split)?;
    let passes = curvatures
        .iter()
        .map(|&k| {
            Some((
                passes(&c, k, direction, &sub.first, seed)?,
                passes(&c, k, direction, &sub.second, seed)?,
                passes(&c, k, direction, &whole, seed)?,
            ))
        })
        .collect();
    Ok(Some(GluingTrial {
        vertices,
        case: sub.case,
        split,
        passes,
    }))
}

/// `count` random flat triangles, alternately split on the long side and
/// on a short side, each evaluated at every curvature of the grid.
pub fn check_gluing(
    count: usize,
    curvatures: &[f64],
    direction: Direction,
    seed: u64,
) -> Result<GluingReport, ComparisonError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tallies: Vec<GluingTally> = curvatures
        .iter()
        .map(|&k| GluingTally {
            k,
            long_side: CaseTally::default(),
            short_side: CaseTally::default(),
        })
        .collect();
    let mut unsplit = 0;
    for i in 0..count {
        let vertices = random_flat_triangle(&mut rng);
        let case = if i % 2 == 0 {
            GluingCase::LongSide
        } else {
            GluingCase::ShortSide
        };
        let Some(trial) = gluing_trial(vertices, case, curvatures, direction, derive_seed(seed, i as u64))? else {
            unsplit += 1;
            continue;
        };
        for (tally, p) in tallies.iter_mut().zip(&trial.passes) {
            let Some((a, b, whole)) = *p else { continue };
            let t = match trial.case {
                GluingCase::LongSide => &mut tally.long_side,
                GluingCase::ShortSide => &mut tally.short_side,
            };
            t.add(a && b, whole, vertices);
        }
    }
    let counterexamples = tallies
        .iter()
        .map(|t| t.long_side.counterexamples + t.short_side.counterexamples)
        .sum();
    Ok(GluingReport {
        direction,
        triangles: count,
        unsplit,
        tallies,
        counterexamples,
    })
}
