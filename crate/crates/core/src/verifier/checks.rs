use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::comparison::{Comparator, ComparisonError, SideKind, Site, DEGENERACY_TOLERANCE, WITNESS_LIMIT};
use crate::model::finite_diameter_constant;
use crate::space::DiscreteSpace;

const ATTEMPTS_PER_SAMPLE: usize = 50;

/// Pairs `x ≪ z` that are the long side of some non-degenerate triangle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NondegeneratePairs {
    pub sampled: u64,
    pub with_witness: u64,
    pub fraction: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiameterResult {
    pub k: f64,
    /// `D_K = π/√(−K)`.
    pub bound: f64,
    pub diameter: f64,
    pub witness: Option<[usize; 2]>,
    /// `diameter − bound`; violations are margins above the tolerance.
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Reported, not used to gate the verdict.
    pub nondegenerate: Option<NondegeneratePairs>,
}

/// Compares the finite diameter with `D_K`. For `K ≥ 0` the bound is
/// infinite and the check passes.
pub fn check_diameter_bound(sp: &DiscreteSpace, k: f64, tolerance: f64) -> DiameterResult {
    let bound = finite_diameter_constant(k);
    let w = sp.finite_diameter_witness();
    let diameter = w.map_or(0.0, |w| w.2);
    let margin = diameter - bound;
    DiameterResult {
        k,
        bound,
        diameter,
        witness: w.map(|(i, j, _)| [i, j]),
        margin,
        tolerance,
        pass: margin <= tolerance,
        nondegenerate: None,
    }
}

/// Seeded sample of distinct timelike pairs.
fn sample_pairs(sp: &DiscreteSpace, budget: usize, seed: u64) -> Vec<(usize, usize)> {
    let n = sp.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    for _ in 0..budget.saturating_mul(ATTEMPTS_PER_SAMPLE) {
        if out.len() == budget {
            break;
        }
        let x = rng.random_range(0..n);
        let fut: Vec<usize> = sp
            .future(x)
            .iter()
            .map(|&z| z as usize)
            .filter(|&z| sp.timelike(x, z))
            .collect();
        if fut.is_empty() {
            continue;
        }
        let z = fut[rng.random_range(0..fut.len())];
        if seen.insert((x, z)) {
            out.push((x, z));
        }
    }
    out
}

/// Fraction of sampled pairs `x ≪ z` admitting `y` with
/// `τ(x,z) > τ(x,y) + τ(y,z)`.
pub fn nondegenerate_pairs(sp: &DiscreteSpace, budget: usize, seed: u64) -> NondegeneratePairs {
    let pairs = sample_pairs(sp, budget, seed);
    let with_witness = pairs
        .iter()
        .filter(|&&(x, z)| {
            sp.diamond(x, z)
                .into_iter()
                .any(|y| sp.tau(x, z) - sp.tau(x, y) - sp.tau(y, z) > DEGENERACY_TOLERANCE)
        })
        .count() as u64;
    let sampled = pairs.len() as u64;
    NondegeneratePairs {
        sampled,
        with_witness,
        fraction: (sampled > 0).then(|| with_witness as f64 / sampled as f64),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerimeterResult {
    pub k: f64,
    /// `2·D_K`.
    pub bound: f64,
    pub triangles: u64,
    pub max_perimeter: Option<f64>,
    pub witness: Option<[usize; 3]>,
    /// `max_perimeter − bound`.
    pub margin: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    /// Whether the triangle check bounded below passed at this `K`, when it
    /// was run.
    pub below_bound_passed: Option<bool>,
}

/// Largest perimeter over the given triples against `2·D_K`.
pub fn check_perimeter(sp: &DiscreteSpace, k: f64, triples: &[[usize; 3]], tolerance: f64) -> PerimeterResult {
    let bound = 2.0 * finite_diameter_constant(k);
    let mut best: Option<(f64, [usize; 3])> = None;
    let mut count = 0;
    for &[x, y, z] in triples {
        let p = sp.tau(x, y) + sp.tau(y, z) + sp.tau(x, z);
        if !p.is_finite() {
            continue;
        }
        count += 1;
        if best.is_none_or(|b| p > b.0) {
            best = Some((p, [x, y, z]));
        }
    }
    let margin = best.map(|b| b.0 - bound);
    PerimeterResult {
        k,
        bound,
        triangles: count,
        max_perimeter: best.map(|b| b.0),
        witness: best.map(|b| b.1),
        margin,
        tolerance,
        pass: margin.is_none_or(|m| m < tolerance),
        below_bound_passed: None,
    }
}

/// One configuration `a ≪ x ≪ b` with `x` on a geodesic from `a` to `b`
/// and `y ∈ I(x, b)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaWitness {
    pub a: usize,
    pub x: Site,
    pub y: usize,
    pub b: usize,
    /// `τ(x,b) − τ(x,y) − τ(y,b)`.
    pub excess: f64,
    /// `τ(a,y) − τ(a,x) − τ(x,y)`; positive when `Δ(a,x,y)` is non-degenerate.
    pub sub_excess: f64,
    /// Angle at `x` between the geodesic towards `b` and the one towards `y`.
    pub angle_future: f64,
    /// Angle at `x` between the geodesic towards `a` and the one towards `y`.
    pub angle_past: f64,
    pub difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NondegeneracyReport {
    pub k: f64,
    /// Configurations with `Δ(x,y,b)` non-degenerate and both angles measured.
    pub configurations: u64,
    /// Skipped because `Δ(x,y,b)` is degenerate.
    pub skipped_degenerate: u64,
    /// Skipped because an angle could not be measured.
    pub unmeasurable: u64,
    pub degenerate_subtriangles: u64,
    pub angle_mismatches: u64,
    pub max_angle_difference: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    /// Whether the triangle check bounded below passed at this `K`, when it
    /// was run.
    pub precondition: Option<bool>,
    pub witnesses: Vec<LemmaWitness>,
}

impl NondegeneracyReport {
    fn keep(&mut self, w: LemmaWitness) {
        let bad = |w: &LemmaWitness| !(w.sub_excess > DEGENERACY_TOLERANCE) || !(w.difference <= self.tolerance);
        let key = |w: &LemmaWitness| (bad(w), w.difference);
        let pos = self
            .witnesses
            .iter()
            .position(|o| {
                let (a, b) = (key(&w), key(o));
                a.0 && !b.0 || (a.0 == b.0 && a.1 > b.1)
            })
            .unwrap_or(self.witnesses.len());
        self.witnesses.insert(pos, w);
        self.witnesses.truncate(WITNESS_LIMIT);
    }
}

/// Samples configurations `a ≪ x ≪ b` with `x` on a side from `a` to `b`
/// and `y ∈ I(x, b)`. Where `Δ(x,y,b)` is non-degenerate, checks that
/// `Δ(a,x,y)` is non-degenerate and that the angles at `x` between the
/// geodesic towards `y` and the two halves of the side agree.
pub fn check_nondegeneracy_lemma(
    c: &Comparator,
    k: f64,
    budget: usize,
    seed: u64,
) -> Result<NondegeneracyReport, ComparisonError> {
    let sp = c.space();
    let n = sp.len();
    let tol = c.tolerances.angle;
    let mut rep = NondegeneracyReport {
        k,
        configurations: 0,
        skipped_degenerate: 0,
        unmeasurable: 0,
        degenerate_subtriangles: 0,
        angle_mismatches: 0,
        max_angle_difference: None,
        tolerance: tol,
        pass: true,
        precondition: None,
        witnesses: Vec::new(),
    };
    if n == 0 {
        return Err(ComparisonError::InsufficientSamples("empty space".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tau = |p: Site, q: Site| c.site_tau(p, q);
    for _ in 0..budget.saturating_mul(ATTEMPTS_PER_SAMPLE) {
        if rep.configurations as usize >= budget {
            break;
        }
        let a = rng.random_range(0..n);
        let ends: Vec<usize> = sp
            .future(a)
            .iter()
            .map(|&b| b as usize)
            .filter(|&b| sp.timelike(a, b))
            .collect();
        if ends.is_empty() {
            continue;
        }
        let b = ends[rng.random_range(0..ends.len())];
        let Ok(side) = c.side_between(SideKind::Xz, Site::Sample(a), Site::Sample(b)) else {
            continue;
        };
        let x = match &side.path {
            Some(path) => c.path_point(path, rng.random_range(0.25..0.75))?,
            None if side.sites.len() > 2 => side.sites[rng.random_range(1..side.sites.len() - 1)],
            None => continue,
        };
        let (sa, sb) = (Site::Sample(a), Site::Sample(b));
        let middles: Vec<usize> = sp
            .future(a)
            .iter()
            .map(|&y| y as usize)
            .filter(|&y| Site::Sample(y) != x && tau(x, Site::Sample(y)) > 0.0 && tau(Site::Sample(y), sb) > 0.0)
            .collect();
        if middles.is_empty() {
            continue;
        }
        let y = middles[rng.random_range(0..middles.len())];
        let sy = Site::Sample(y);
        let excess = tau(x, sb) - tau(x, sy) - tau(sy, sb);
        if !(excess > DEGENERACY_TOLERANCE) {
            rep.skipped_degenerate += 1;
            continue;
        }
        let sub_excess = tau(sa, sy) - tau(sa, x) - tau(x, sy);
        let measured = c
            .hinge(x, sb, sy)
            .and_then(|h| c.measure_angle(&h))
            .and_then(|f| Ok((f, c.measure_angle(&c.hinge(x, sa, sy)?)?)));
        let Ok((future, past)) = measured else {
            rep.unmeasurable += 1;
            continue;
        };
        rep.configurations += 1;
        let difference = (future.angle - past.angle).abs();
        if !(sub_excess > DEGENERACY_TOLERANCE) {
            rep.degenerate_subtriangles += 1;
        }
        if !(difference <= tol) || !(future.angle > 0.0 && past.angle > 0.0) {
            rep.angle_mismatches += 1;
        }
        if rep.max_angle_difference.is_none_or(|m| difference > m) {
            rep.max_angle_difference = Some(difference);
        }
        rep.keep(LemmaWitness {
            a,
            x,
            y,
            b,
            excess,
            sub_excess,
            angle_future: future.angle,
            angle_past: past.angle,
            difference,
        });
    }
    if rep.configurations == 0 {
        return Err(ComparisonError::InsufficientSamples(format!(
            "no measurable configuration with a non-degenerate Δ(x,y,b) ({} degenerate, {} unmeasurable)",
            rep.skipped_degenerate, rep.unmeasurable
        )));
    }
    rep.pass = rep.degenerate_subtriangles == 0 && rep.angle_mismatches == 0;
    Ok(rep)
}
