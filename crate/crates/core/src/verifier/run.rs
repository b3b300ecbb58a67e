use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use super::checks::{check_diameter_bound, check_nondegeneracy_lemma, check_perimeter, nondegenerate_pairs};
use super::local::{assemble, evaluate_diamonds, sample_diamonds, UniquenessProxy};
use super::report::{
    CampaignStatus, HierarchyResult, Outcome, Runtime, SampleSummary, SpaceSummary, TriangleMargin, VerdictEntry,
    VerificationReport,
};
use super::{derive_seed, streams, Campaign, Locality, VerifierError};
use crate::comparison::{
    realize_triangle, Comparator, ComparisonError, ComparisonVerdict, Direction, Formulation, Hinge, TimelikeTriangle,
    TriangleFilter,
};
use crate::model::VertexRole;
use crate::space::DiscreteSpace;

/// One combination of formulation, direction and curvature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Slot {
    pub formulation: Formulation,
    pub direction: Direction,
    pub k: f64,
}

/// Result of one slot on one triangle: the verdict over whatever could be
/// evaluated, and why the rest could not.
#[derive(Debug, Clone)]
pub(crate) struct SlotOutcome {
    pub verdict: Option<ComparisonVerdict>,
    pub skips: Vec<&'static str>,
}

const ROLES: [VertexRole; 3] = [VertexRole::Past, VertexRole::Middle, VertexRole::Future];

fn reason(e: &ComparisonError) -> &'static str {
    match e {
        ComparisonError::PairOffTriangle(_) => "pair-off-triangle",
        ComparisonError::InsufficientSamples(_) => "insufficient-samples",
        ComparisonError::AngleUndefined(_) => "angle-undefined",
        ComparisonError::NonConvergent { .. } => "angle-not-convergent",
        ComparisonError::NotTimelikeRelated(_) => "not-timelike-related",
        ComparisonError::Unrealizable(_) => "unrealizable",
        ComparisonError::Space(_) => "space-error",
        ComparisonError::Model(_) => "model-error",
    }
}

fn slots_for(formulations: &[Formulation], directions: &[Direction], curvatures: &[f64]) -> Vec<Slot> {
    let mut out = Vec::new();
    for &formulation in formulations {
        for &direction in directions {
            for &k in curvatures {
                out.push(Slot {
                    formulation,
                    direction,
                    k,
                });
            }
        }
    }
    out
}

fn evaluate_one(c: &Comparator, i: usize, t: &TimelikeTriangle, slots: &[Slot], pair_seed: u64) -> Vec<SlotOutcome> {
    let uses = |f: Formulation| slots.iter().any(|s| s.formulation == f);
    let pairs = if uses(Formulation::Triangle) {
        c.side_pairs(t, derive_seed(pair_seed, i as u64))
    } else {
        Vec::new()
    };
    let hinges: Vec<Hinge> = if slots.iter().any(|s| s.formulation != Formulation::Triangle) {
        ROLES.iter().map(|&r| c.hinge_at(t, r)).collect()
    } else {
        Vec::new()
    };
    let measures: Vec<_> = if uses(Formulation::Angle) || uses(Formulation::Hinge) {
        hinges
            .iter()
            .map(|h| c.measure_angle(h).map_err(|e| reason(&e)))
            .collect()
    } else {
        Vec::new()
    };
    let base = 3 * i as u64;
    let mut configs: Vec<(f64, Result<_, ComparisonError>)> = Vec::new();
    slots
        .iter()
        .map(|s| {
            let mut skips = Vec::new();
            let verdict = match s.formulation {
                Formulation::Triangle => {
                    if !configs.iter().any(|(k, _)| *k == s.k) {
                        configs.push((s.k, realize_triangle(s.k, t)));
                    }
                    let cfg = &configs.iter().find(|(k, _)| *k == s.k).unwrap().1;
                    match cfg.as_ref().map_err(reason).and_then(|cfg| {
                        c.compare_triangle(s.k, s.direction, t, cfg, &pairs)
                            .map_err(|e| reason(&e))
                    }) {
                        Ok(mut v) => {
                            v.stamp(base);
                            Some(v)
                        }
                        Err(r) => {
                            skips.push(r);
                            None
                        }
                    }
                }
                f => {
                    let mut acc: Option<ComparisonVerdict> = None;
                    for (r, h) in hinges.iter().enumerate() {
                        let res = match f {
                            Formulation::Monotonicity => {
                                c.compare_monotonicity(s.k, s.direction, h).map_err(|e| reason(&e))
                            }
                            Formulation::Angle => measures[r]
                                .as_ref()
                                .map_err(|r| *r)
                                .and_then(|m| c.compare_angle(s.k, s.direction, h, m).map_err(|e| reason(&e))),
                            _ => measures[r]
                                .as_ref()
                                .map_err(|r| *r)
                                .and_then(|m| c.compare_hinge(s.k, s.direction, h, m).map_err(|e| reason(&e))),
                        };
                        match res {
                            Ok(v) if v.samples == 0 && v.skipped > 0 => skips.push("law-of-cosines-undefined"),
                            Ok(mut v) => {
                                v.stamp(base + r as u64);
                                match &mut acc {
                                    Some(a) => a.merge(v),
                                    None => acc = Some(v),
                                }
                            }
                            Err(e) => skips.push(e),
                        }
                    }
                    acc.map(|mut a| {
                        a.triangles = 1;
                        a
                    })
                }
            };
            SlotOutcome { verdict, skips }
        })
        .collect()
}

/// Evaluates every slot on every triangle, in parallel over triangles.
pub(crate) fn evaluate_triangles(
    c: &Comparator,
    tris: &[TimelikeTriangle],
    slots: &[Slot],
    pair_seed: u64,
) -> Vec<Vec<SlotOutcome>> {
    tris.par_iter()
        .enumerate()
        .map(|(i, t)| evaluate_one(c, i, t, slots, pair_seed))
        .collect()
}

/// Folds per-triangle outcomes into one entry per slot, in triangle order.
pub(crate) fn merge_outcomes(
    c: &Comparator,
    slots: &[Slot],
    tris: &[TimelikeTriangle],
    mut outcomes: Vec<Vec<SlotOutcome>>,
) -> (Vec<VerdictEntry>, Vec<TriangleMargin>) {
    let mut entries = Vec::new();
    let mut margins = Vec::new();
    for (si, s) in slots.iter().enumerate() {
        let mut total = ComparisonVerdict::new(
            s.formulation,
            s.direction,
            s.k,
            c.tolerances.for_formulation(s.formulation),
        );
        let mut reasons: BTreeMap<String, u64> = BTreeMap::new();
        let mut evaluated = false;
        for (t, outs) in tris.iter().zip(outcomes.iter_mut()) {
            let o = &mut outs[si];
            for r in &o.skips {
                *reasons.entry(r.to_string()).or_default() += 1;
                total.skipped += 1;
            }
            if let Some(v) = o.verdict.take() {
                evaluated = true;
                margins.push(TriangleMargin {
                    formulation: s.formulation,
                    direction: s.direction,
                    k: s.k,
                    triangle: t.sample_vertices().unwrap_or_default(),
                    samples: v.samples,
                    worst_margin: v.worst_margin,
                    pass: v.pass,
                });
                total.merge(v);
            }
        }
        let outcome = if evaluated {
            Outcome::done(total)
        } else if tris.is_empty() {
            Outcome::skipped("no triangle in the sample")
        } else {
            let top = reasons
                .iter()
                .max_by_key(|(_, n)| **n)
                .map(|(r, _)| r.as_str())
                .unwrap_or("unknown");
            Outcome::skipped(format!("no triangle could be evaluated (mostly {top})"))
        };
        entries.push(VerdictEntry {
            formulation: s.formulation,
            direction: s.direction,
            k: s.k,
            outcome,
            skip_reasons: reasons,
        });
    }
    (entries, margins)
}

/// Per-triangle implications between curvatures: a bound below at `K`
/// implies it at every larger `K`, a bound above at every smaller one.
fn hierarchy(slots: &[Slot], outcomes: &[Vec<SlotOutcome>], tris: &[TimelikeTriangle]) -> Vec<HierarchyResult> {
    let mut out = Vec::new();
    for (i, a) in slots.iter().enumerate() {
        for (j, b) in slots.iter().enumerate() {
            if a.formulation != b.formulation || a.direction != b.direction || a.k == b.k {
                continue;
            }
            let implied = match a.direction {
                Direction::Below => b.k > a.k,
                Direction::Above => b.k < a.k,
            };
            if !implied {
                continue;
            }
            let mut r = HierarchyResult {
                formulation: a.formulation,
                direction: a.direction,
                from_k: a.k,
                to_k: b.k,
                compared: 0,
                passing_at_from: 0,
                counterexamples: 0,
                examples: Vec::new(),
            };
            for (t, o) in tris.iter().zip(outcomes) {
                let (Some(va), Some(vb)) = (&o[i].verdict, &o[j].verdict) else {
                    continue;
                };
                r.compared += 1;
                if va.pass {
                    r.passing_at_from += 1;
                    if !vb.pass {
                        r.counterexamples += 1;
                        if r.examples.len() < 5 {
                            r.examples.push(t.sample_vertices().unwrap_or_default());
                        }
                    }
                }
            }
            out.push(r);
        }
    }
    out
}

struct Timer {
    start: Instant,
    lap: Instant,
    steps: Vec<(String, f64)>,
}

impl Timer {
    fn new() -> Self {
        let now = Instant::now();
        Self {
            start: now,
            lap: now,
            steps: Vec::new(),
        }
    }

    fn mark(&mut self, name: &str) {
        self.steps.push((name.to_string(), self.lap.elapsed().as_secs_f64()));
        self.lap = Instant::now();
    }
}

pub(crate) fn execute(
    c: &Campaign,
    sp: &DiscreteSpace,
    jobs: Option<usize>,
) -> Result<VerificationReport, VerifierError> {
    let mut timer = Timer::new();
    let comparator = Comparator::new(sp)
        .with_side_mode(c.side_mode)?
        .with_grid(c.budgets.side_grid)
        .with_tolerances(c.tolerances)
        .with_pair_budget(c.budgets.pairs_per_triangle);

    let axioms = if c.checks.axioms {
        Outcome::done(sp.validate_axioms(c.tolerances.axiom))
    } else {
        Outcome::skipped("disabled")
    };
    timer.mark("axioms");

    let filter = TriangleFilter::realizable_for(&c.curvatures);
    let sampled: Vec<[usize; 3]> = comparator
        .sample_triples(&filter, c.budgets.triangles, derive_seed(c.seed, streams::TRIANGLES))
        .into_iter()
        .filter(|t| !c.triangles.contains(t))
        .collect();
    let triples: Vec<[usize; 3]> = c.triangles.iter().copied().chain(sampled.iter().copied()).collect();
    let built: Vec<Result<TimelikeTriangle, ComparisonError>> = triples
        .par_iter()
        .map(|&[x, y, z]| comparator.triangle(x, y, z))
        .collect();
    let mut tris = Vec::new();
    let mut dropped = 0;
    for (i, r) in built.into_iter().enumerate() {
        match r {
            Ok(t) => tris.push(t),
            Err(e) if i < c.triangles.len() => {
                return Err(VerifierError::InvalidCampaign(format!(
                    "triangle {:?} cannot be used: {e}",
                    triples[i]
                )))
            }
            Err(_) => dropped += 1,
        }
    }
    let sample = SampleSummary {
        side_mode: if comparator.uses_ambient_sides() {
            "ambient"
        } else {
            "chains"
        }
        .to_string(),
        max_longest_side: filter.max_longest,
        requested: c.budgets.triangles,
        given: c.triangles.len(),
        sampled: sampled.len(),
        dropped,
        degenerate: tris.iter().filter(|t| t.degenerate).count(),
    };
    timer.mark("sampling");

    let all_slots = slots_for(&c.formulations, &c.directions, &c.curvatures);
    let pair_seed = derive_seed(c.seed, streams::PAIRS);
    let mut local_vs_global = Vec::new();
    let (verdicts, margins, hierarchy_outcome) = match &c.locality {
        Locality::Global => {
            let outcomes = evaluate_triangles(&comparator, &tris, &all_slots, pair_seed);
            let h = if !c.checks.hierarchy {
                Outcome::skipped("disabled")
            } else if c.curvatures.len() < 2 {
                Outcome::skipped("needs at least two curvatures")
            } else {
                Outcome::done(hierarchy(&all_slots, &outcomes, &tris))
            };
            let (v, m) = merge_outcomes(&comparator, &all_slots, &tris, outcomes);
            timer.mark("comparison");
            for &k in &c.curvatures {
                local_vs_global.push(Outcome::skipped(format!("locality is global (K={k})")));
            }
            (v, m, h)
        }
        Locality::Diamonds(params) => {
            let tri_slots = slots_for(&[Formulation::Triangle], &c.directions, &c.curvatures);
            let outcomes = evaluate_triangles(&comparator, &tris, &tri_slots, pair_seed);
            let (global, _) = merge_outcomes(&comparator, &tri_slots, &tris, outcomes);
            timer.mark("comparison");
            let diamonds = sample_diamonds(sp, params, derive_seed(c.seed, streams::DIAMONDS));
            let local = evaluate_diamonds(
                &comparator,
                &diamonds,
                &tri_slots,
                &c.curvatures,
                params.triangles_per_diamond,
                derive_seed(c.seed, streams::DIAMONDS + 100),
            );
            timer.mark("diamonds");
            let mut margins = Vec::new();
            let mut merged: Vec<Option<ComparisonVerdict>> = vec![None; tri_slots.len()];
            for d in &local {
                for (si, v) in d.verdicts.iter().enumerate() {
                    if let Some(v) = v {
                        match &mut merged[si] {
                            Some(m) => m.merge(v.clone()),
                            None => merged[si] = Some(v.clone()),
                        }
                    }
                }
                margins.extend(d.margins.iter().cloned());
            }
            let uniqueness = UniquenessProxy::from_triangles(&comparator, &tris);
            for &k in &c.curvatures {
                let Some(si) = tri_slots
                    .iter()
                    .position(|s| s.direction == Direction::Above && s.k == k)
                else {
                    local_vs_global.push(Outcome::skipped(format!(
                        "the globalization check concerns bounds above (K={k})"
                    )));
                    continue;
                };
                if diamonds.is_empty() {
                    local_vs_global.push(Outcome::skipped(format!(
                        "no diamond with at least {} interior points (K={k})",
                        params.min_interior
                    )));
                    continue;
                }
                let per_diamond = local.iter().map(|d| d.verdicts[si].clone()).collect();
                local_vs_global.push(Outcome::done(assemble(
                    k,
                    Direction::Above,
                    &diamonds,
                    per_diamond,
                    global[si].outcome.result().cloned(),
                    uniqueness.clone(),
                )));
            }
            let verdicts = all_slots
                .iter()
                .map(|s| {
                    let outcome = if s.formulation != Formulation::Triangle {
                        Outcome::skipped("local campaigns evaluate the triangle formulation inside diamonds")
                    } else if diamonds.is_empty() {
                        Outcome::skipped(format!(
                            "no diamond with at least {} interior points",
                            params.min_interior
                        ))
                    } else {
                        let si = tri_slots
                            .iter()
                            .position(|t| t.direction == s.direction && t.k == s.k)
                            .unwrap();
                        match merged[si].take() {
                            Some(v) => Outcome::done(v),
                            None => Outcome::skipped("no triangle inside the sampled diamonds"),
                        }
                    };
                    VerdictEntry {
                        formulation: s.formulation,
                        direction: s.direction,
                        k: s.k,
                        outcome,
                        skip_reasons: BTreeMap::new(),
                    }
                })
                .collect();
            (verdicts, margins, Outcome::skipped("hierarchy uses the global sample"))
        }
    };

    let below_pass = |k: f64| {
        verdicts
            .iter()
            .find(|e| e.formulation == Formulation::Triangle && e.direction == Direction::Below && e.k == k)
            .and_then(VerdictEntry::verdict)
            .map(|v| v.pass)
    };

    let mut diameter = Vec::new();
    let mut perimeter = Vec::new();
    let negative: Vec<f64> = c.curvatures.iter().copied().filter(|&k| k < 0.0).collect();
    let perimeter_triples: Vec<[usize; 3]> = if c.checks.perimeter && !negative.is_empty() {
        let mut t = c.triangles.clone();
        t.extend(
            comparator
                .sample_triples(
                    &TriangleFilter::default(),
                    c.budgets.perimeter_triples,
                    derive_seed(c.seed, streams::PERIMETER),
                )
                .into_iter()
                .filter(|x| !c.triangles.contains(x)),
        );
        t
    } else {
        Vec::new()
    };
    let nondegenerate = (c.checks.diameter && !negative.is_empty()).then(|| {
        nondegenerate_pairs(
            sp,
            c.budgets.nondegeneracy_pairs,
            derive_seed(c.seed, streams::NONDEGENERATE),
        )
    });
    for &k in &c.curvatures {
        if !c.checks.diameter {
            diameter.push(Outcome::skipped(format!("disabled (K={k})")));
        } else if k >= 0.0 {
            diameter.push(Outcome::skipped(format!("no finite bound for K={k} ≥ 0")));
        } else {
            let mut r = check_diameter_bound(sp, k, c.tolerances.axiom);
            r.nondegenerate = nondegenerate.clone();
            diameter.push(Outcome::done(r));
        }
        if !c.checks.perimeter {
            perimeter.push(Outcome::skipped(format!("disabled (K={k})")));
        } else if k >= 0.0 {
            perimeter.push(Outcome::skipped(format!("no finite bound for K={k} ≥ 0")));
        } else {
            let mut r = check_perimeter(sp, k, &perimeter_triples, c.tolerances.axiom);
            r.below_bound_passed = below_pass(k);
            perimeter.push(Outcome::done(r));
        }
    }
    timer.mark("diameter");

    let mut nondegeneracy = Vec::new();
    if c.checks.nondegeneracy {
        let lemma = check_nondegeneracy_lemma(
            &comparator,
            c.curvatures[0],
            c.budgets.lemma_configurations,
            derive_seed(c.seed, streams::LEMMA),
        );
        for &k in &c.curvatures {
            nondegeneracy.push(match &lemma {
                Ok(r) => {
                    let mut r = r.clone();
                    r.k = k;
                    r.precondition = below_pass(k);
                    Outcome::done(r)
                }
                Err(e) => Outcome::skipped(e.to_string()),
            });
        }
    } else {
        nondegeneracy = c
            .curvatures
            .iter()
            .map(|k| Outcome::skipped(format!("disabled (K={k})")))
            .collect();
    }
    timer.mark("nondegeneracy");

    let mut report = VerificationReport {
        status: CampaignStatus {
            pass: true,
            summary: String::new(),
            failed_checks: Vec::new(),
        },
        campaign: c.clone(),
        space: SpaceSummary::of(sp),
        axioms,
        sample,
        verdicts,
        hierarchy: hierarchy_outcome,
        local_vs_global,
        diameter,
        perimeter,
        nondegeneracy,
        margins,
        runtime: Runtime::default(),
    };
    report.assess();
    report.runtime = Runtime {
        jobs,
        seconds: timer.start.elapsed().as_secs_f64(),
        steps: timer.steps,
    };
    Ok(report)
}
