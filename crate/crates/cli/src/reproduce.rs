//! Worked examples: the cylinder counterexample, gluing of sub-triangles and
//! the finite-diameter argument at `K = -1`.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use lorcomp::comparison::{
    realize_triangle, Comparator, ComparisonConfiguration, Direction, Formulation, GluingCase, SideKind, Site,
    TimelikeTriangle,
};
use lorcomp::generators::cylinder::{maximizing_windings, winding_geodesic};
use lorcomp::generators::{
    bonnet_hinge_sides, bonnet_t, fixture, sprinkle, Amount, Region, SprinkleSpec, BONNET_EPSILON, BONNET_M,
    BONNET_OMEGA, CYLINDER_SEGMENTS,
};
use lorcomp::space::{AxiomReport, DEFAULT_AXIOM_TOLERANCE};
use lorcomp::verifier::{
    check_diameter_bound, check_gluing, run_campaign_on, Campaign, DiameterResult, DiamondParams, GluingReport,
    Locality, SpaceSource, VerificationReport,
};
use lorcomp::{Ambient, DiscreteSpace, ModelPoint, ModelSpace, TriangleSides};

use crate::CliError;

/// Points sprinkled around the cylinder fixture so that small diamonds
/// have interiors.
pub const CYLINDER_SPRINKLE: usize = 400;
/// Random flat triangles in the gluing experiment.
pub const GLUING_TRIANGLES: usize = 1000;
/// Flat triangles satisfy the bound above at these curvatures. Above a
/// positive `K` they violate it by amounts that shrink with the triangle,
/// so small pieces pass within the absolute tolerance while the whole
/// fails; that says nothing about gluing.
pub const GLUING_CURVATURES: [f64; 2] = [-0.5, 0.0];
const POLYLINE_STEPS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Cylinder,
    Gluing,
    Bonnet,
}

impl Scenario {
    pub const NAMES: [&'static str; 3] = ["cylinder", "gluing", "bonnet"];

    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::Cylinder => "cylinder",
            Scenario::Gluing => "gluing",
            Scenario::Bonnet => "bonnet",
        }
    }
}

impl FromStr for Scenario {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "cylinder" => Ok(Scenario::Cylinder),
            "gluing" => Ok(Scenario::Gluing),
            "bonnet" => Ok(Scenario::Bonnet),
            other => Err(CliError::UnknownScenario(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproduceConfig {
    pub scenario: String,
    pub local: bool,
    pub seed: u64,
}

/// A named polyline in chart coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polyline {
    pub name: String,
    pub points: Vec<ModelPoint>,
}

pub fn polylines_csv(lines: &[Polyline]) -> String {
    let mut s = String::from("polyline,vertex,t,x\n");
    for l in lines {
        for (i, p) in l.points.iter().enumerate() {
            let _ = writeln!(s, "{},{i},{},{}", l.name, p.time, p.space);
        }
    }
    s
}

/// A pair of side points with `τ = 0` in both orders whose comparison
/// points are timelike related.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CylinderWitness {
    pub p: Site,
    pub p_side: SideKind,
    pub p_fraction: f64,
    pub q: Site,
    pub q_side: SideKind,
    pub q_fraction: f64,
    pub tau: f64,
    pub tau_bar: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CylinderDetails {
    pub circumference: f64,
    pub sprinkled: usize,
    /// Indices of `x`, `y`, `z` in the space.
    pub triangle: [usize; 3],
    pub sides: TriangleSides,
    pub degenerate: bool,
    /// Maximizing windings from `x` to `z`.
    pub windings: Vec<i64>,
    pub witness: Option<CylinderWitness>,
    /// The two maximizing geodesics from `x` to `z`, reduced to the strip.
    pub left_geodesic: Vec<ModelPoint>,
    pub right_geodesic: Vec<ModelPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GluingSplit {
    pub case: GluingCase,
    pub split: Site,
    /// Verdicts of the first piece, the second piece and the whole, above
    /// and below.
    pub above: [bool; 3],
    pub below: [bool; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GluingDetails {
    pub splits: Vec<GluingSplit>,
    pub random: GluingReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BonnetStep {
    pub claim: String,
    pub values: Vec<(String, f64)>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BonnetDetails {
    pub epsilon: f64,
    pub m: f64,
    pub omega: f64,
    pub t: f64,
    pub p_tilde: f64,
    pub q_tilde: f64,
    pub steps: Vec<BonnetStep>,
    /// The fixture carries `τ(a,b) = 2t > π` and therefore fails both the
    /// diameter bound and the reverse triangle inequality at `(a, y, b)`.
    pub fixture_diameter: DiameterResult,
    pub fixture_axioms: AxiomReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioDetails {
    Cylinder(CylinderDetails),
    Gluing(GluingDetails),
    Bonnet(BonnetDetails),
}

pub struct ScenarioRun {
    pub config: ReproduceConfig,
    pub details: ScenarioDetails,
    pub report: Option<VerificationReport>,
    /// Exit status: the cylinder reports its campaign status, the other
    /// scenarios whether every expected outcome was observed.
    pub pass: bool,
    pub lines: Vec<String>,
    pub configuration: Vec<Polyline>,
    pub comparison: Vec<Polyline>,
}

pub fn run_scenario(s: Scenario, local: bool, seed: u64, jobs: Option<usize>) -> Result<ScenarioRun, CliError> {
    let config = ReproduceConfig {
        scenario: s.as_str().to_string(),
        local,
        seed,
    };
    match s {
        Scenario::Cylinder => cylinder(config, jobs),
        Scenario::Gluing => gluing(config),
        Scenario::Bonnet => bonnet(config),
    }
}

fn model_polyline(name: &str, model: ModelSpace, a: ModelPoint, b: ModelPoint) -> Result<Polyline, CliError> {
    let points = (0..=POLYLINE_STEPS)
        .map(|i| model.geodesic(a, b, i as f64 / POLYLINE_STEPS as f64))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Polyline {
        name: name.to_string(),
        points,
    })
}

fn realization_polylines(prefix: &str, cfg: &ComparisonConfiguration) -> Result<Vec<Polyline>, CliError> {
    let [x, y, z] = cfg.vertices;
    let m = cfg.model();
    Ok(vec![
        model_polyline(&format!("{prefix}xy"), m, x, y)?,
        model_polyline(&format!("{prefix}yz"), m, y, z)?,
        model_polyline(&format!("{prefix}xz"), m, x, z)?,
    ])
}

fn fmt_point(p: ModelPoint) -> String {
    format!("({:.6}, {:.6})", p.time, p.space)
}

/// The cylinder fixture together with a sprinkle of the same strip.
pub fn cylinder_space(seed: u64) -> Result<(DiscreteSpace, [usize; 3]), CliError> {
    let f = fixture("cylinder-counterexample")?;
    let amb = *f.space.ambient().expect("the cylinder fixture has an ambient");
    let Ambient::Cylinder { circumference } = amb else {
        unreachable!("the cylinder fixture lives on the cylinder")
    };
    let mut points: Vec<ModelPoint> = (0..f.space.len()).filter_map(|i| f.space.coords(i)).collect();
    let region = Region::Rect {
        t0: 0.0,
        t1: 4.0,
        x0: 0.0,
        x1: circumference,
    };
    let extra = sprinkle(&SprinkleSpec::new(amb, region, Amount::Count(CYLINDER_SPRINKLE), seed))?;
    points.extend((0..extra.len()).filter_map(|i| extra.coords(i)));
    let sp = DiscreteSpace::from_ambient(points, amb)?;
    Ok((sp, [f.label("x"), f.label("y"), f.label("z")]))
}

fn cylinder_witness(
    c: &Comparator,
    t: &TimelikeTriangle,
    cfg: &ComparisonConfiguration,
) -> Result<Option<CylinderWitness>, CliError> {
    let mut best: Option<CylinderWitness> = None;
    for (i, &s1) in SideKind::ALL.iter().enumerate() {
        for &s2 in &SideKind::ALL[i + 1..] {
            for a in t.side_points(s1) {
                for b in t.side_points(s2) {
                    let (p, q) = (t.site(&a)?, t.site(&b)?);
                    if c.site_tau(p, q) != 0.0 || c.site_tau(q, p) != 0.0 {
                        continue;
                    }
                    let (pb, qb) = (cfg.comparison_point(&a)?, cfg.comparison_point(&b)?);
                    let bar = cfg.tau(pb, qb).max(cfg.tau(qb, pb));
                    if best.as_ref().is_none_or(|w| bar > w.tau_bar) {
                        best = Some(CylinderWitness {
                            p,
                            p_side: a.side,
                            p_fraction: a.fraction,
                            q,
                            q_side: b.side,
                            q_fraction: b.fraction,
                            tau: 0.0,
                            tau_bar: bar,
                        });
                    }
                }
            }
        }
    }
    Ok(best)
}

fn cylinder(config: ReproduceConfig, jobs: Option<usize>) -> Result<ScenarioRun, CliError> {
    let (sp, [x, y, z]) = cylinder_space(config.seed)?;
    let Some(&Ambient::Cylinder { circumference: l }) = sp.ambient() else {
        unreachable!("cylinder_space has a cylinder ambient")
    };
    let c = Comparator::new(&sp);
    let t = c.triangle(x, y, z)?;
    let cfg = realize_triangle(0.0, &t)?;
    let witness = cylinder_witness(&c, &t, &cfg)?;

    let (px, pz) = (sp.coords(x).unwrap(), sp.coords(z).unwrap());
    let windings: Vec<i64> = maximizing_windings(l, px, pz, 1e-12)
        .iter()
        .map(|w| w.winding)
        .collect();
    let lift = |w: i64, steps: usize| -> Vec<ModelPoint> {
        (0..=steps)
            .map(|i| winding_geodesic(l, px, pz, w, i as f64 / steps as f64))
            .collect()
    };
    let reduce = |p: ModelPoint| ModelPoint::new(p.time, p.space.rem_euclid(l));
    let left_w = windings.iter().copied().min().unwrap_or(0);
    let right_w = windings.iter().copied().max().unwrap_or(0);
    let left_geodesic: Vec<ModelPoint> = lift(left_w, CYLINDER_SEGMENTS).into_iter().map(reduce).collect();
    let right_geodesic: Vec<ModelPoint> = lift(right_w, CYLINDER_SEGMENTS).into_iter().map(reduce).collect();

    let mut campaign = Campaign::new(
        SpaceSource::Provided {
            description: format!(
                "cylinder-counterexample fixture with {CYLINDER_SPRINKLE} points sprinkled on t in [0, 4], seed {}",
                config.seed
            ),
        },
        vec![0.0],
        config.seed,
    );
    campaign.directions = vec![Direction::Above];
    campaign.formulations = vec![Formulation::Triangle];
    campaign.triangles = vec![[x, y, z]];
    if config.local {
        campaign.locality = Locality::Diamonds(DiamondParams::default());
    }
    let report = run_campaign_on(&campaign, &sp, jobs)?;

    let mut lines = vec![
        format!(
            "cylinder of circumference {l:.6}: {} fixture points and {CYLINDER_SPRINKLE} sprinkled points",
            sp.len() - CYLINDER_SPRINKLE
        ),
        format!(
            "triangle x = #{x} {}, y = #{y} {}, z = #{z} {}",
            fmt_point(px),
            fmt_point(sp.coords(y).unwrap()),
            fmt_point(pz)
        ),
        format!(
            "sides: tau(x,y) = {:.9}, tau(y,z) = {:.9}, tau(x,z) = {:.9}{}",
            t.lengths.a,
            t.lengths.b,
            t.lengths.c,
            if t.degenerate { " (degenerate)" } else { "" }
        ),
        format!(
            "maximizing geodesics from x to z: {} (windings {windings:?})",
            windings.len()
        ),
        format!(
            "left geodesic:  {}",
            left_geodesic
                .iter()
                .map(|p| fmt_point(*p))
                .collect::<Vec<_>>()
                .join(" ")
        ),
        format!(
            "right geodesic: {}",
            right_geodesic
                .iter()
                .map(|p| fmt_point(*p))
                .collect::<Vec<_>>()
                .join(" ")
        ),
    ];
    match &witness {
        Some(w) => lines.push(format!(
            "counterexample pair: p = {} on {} at {:.4}, q = {} on {} at {:.4}: tau(p,q) = {}, comparison tau = {:.9}",
            crate::report::site(&w.p),
            w.p_side.as_str(),
            w.p_fraction,
            crate::report::site(&w.q),
            w.q_side.as_str(),
            w.q_fraction,
            w.tau,
            w.tau_bar
        )),
        None => lines.push("no pair with tau = 0 on the triangle".into()),
    }
    lines.extend(crate::report::summary(&report));

    let lifted_side = |kind: SideKind| -> Polyline {
        let side = t.side(kind);
        let path = side.path.as_ref().expect("ambient sides carry their path");
        let w = path.winding.unwrap_or(0);
        Polyline {
            name: format!("side-{}", kind.as_str()),
            points: (0..=POLYLINE_STEPS)
                .map(|i| winding_geodesic(l, path.from, path.to, w, i as f64 / POLYLINE_STEPS as f64))
                .collect(),
        }
    };
    let mut configuration = vec![
        Polyline {
            name: "left-geodesic".into(),
            points: lift(left_w, POLYLINE_STEPS),
        },
        Polyline {
            name: "right-geodesic".into(),
            points: lift(right_w, POLYLINE_STEPS),
        },
    ];
    configuration.extend(SideKind::ALL.iter().map(|&k| lifted_side(k)));
    let mut comparison = realization_polylines("comparison-", &cfg)?;
    if let Some(w) = &witness {
        let on = |kind: SideKind, f: f64| cfg.point(kind, f);
        comparison.push(Polyline {
            name: "comparison-pair".into(),
            points: vec![on(w.p_side, w.p_fraction)?, on(w.q_side, w.q_fraction)?],
        });
        configuration.push(Polyline {
            name: "pair".into(),
            points: vec![
                c.site_coords(w.p).expect("ambient sites have coordinates"),
                c.site_coords(w.q).expect("ambient sites have coordinates"),
            ],
        });
    }

    let details = CylinderDetails {
        circumference: l,
        sprinkled: CYLINDER_SPRINKLE,
        triangle: [x, y, z],
        sides: t.lengths,
        degenerate: t.degenerate,
        windings,
        witness,
        left_geodesic,
        right_geodesic,
    };
    Ok(ScenarioRun {
        config,
        details: ScenarioDetails::Cylinder(details),
        pass: report.status.pass,
        report: Some(report),
        lines,
        configuration,
        comparison,
    })
}

fn gluing(config: ReproduceConfig) -> Result<ScenarioRun, CliError> {
    let f = fixture("gluing-basic")?;
    let points: Vec<ModelPoint> = (0..f.space.len()).filter_map(|i| f.space.coords(i)).collect();
    let flat = ModelSpace::minkowski();
    let sp = DiscreteSpace::from_ambient(points.clone(), Ambient::model(flat))?;
    let c = Comparator::new(&sp);
    let (x, y, z, p) = (f.label("x"), f.label("y"), f.label("z"), f.label("p"));
    let whole = c.triangle(x, y, z)?;
    let split_points = [
        whole.snap(SideKind::Xz, sp.tau(x, p) / sp.tau(x, z)),
        whole.snap(SideKind::Xy, 0.5),
    ];

    let verdict = |t: &TimelikeTriangle, d: Direction| -> Result<bool, CliError> {
        let cfg = realize_triangle(0.0, t)?;
        let pairs = c.side_pairs(t, config.seed);
        Ok(c.compare_triangle(0.0, d, t, &cfg, &pairs)?.pass)
    };
    let mut lines = vec![format!(
        "flat triangle x = {}, y = {}, z = {}",
        fmt_point(points[x]),
        fmt_point(points[y]),
        fmt_point(points[z])
    )];
    let mut splits = Vec::new();
    let mut configuration = vec![
        model_polyline("whole-xy", flat, points[x], points[y])?,
        model_polyline("whole-yz", flat, points[y], points[z])?,
        model_polyline("whole-xz", flat, points[x], points[z])?,
    ];
    let mut comparison = realization_polylines("whole-", &realize_triangle(0.0, &whole)?)?;
    for sp_point in &split_points {
        let sub = c.glue_subdivide(&whole, sp_point)?;
        let tris = [&sub.first, &sub.second, &whole];
        let mut above = [false; 3];
        let mut below = [false; 3];
        for (i, t) in tris.iter().enumerate() {
            above[i] = verdict(t, Direction::Above)?;
            below[i] = verdict(t, Direction::Below)?;
        }
        let name = match sub.case {
            GluingCase::LongSide => "long-side",
            GluingCase::ShortSide => "short-side",
        };
        let split = c.site_coords(sub.split).expect("flat sites have coordinates");
        lines.push(format!(
            "{name} split at {} on {}",
            fmt_point(split),
            sp_point.side.as_str()
        ));
        for (label, i) in [("first piece", 0), ("second piece", 1), ("whole", 2)] {
            let [a, b, cc] = tris[i].vertices.map(|s| c.site_coords(s).unwrap());
            lines.push(format!(
                "  {label} ({}, {}, {}): above K=0 {}, below K=0 {}",
                fmt_point(a),
                fmt_point(b),
                fmt_point(cc),
                if above[i] { "pass" } else { "FAIL" },
                if below[i] { "pass" } else { "FAIL" }
            ));
        }
        let opposite = match sp_point.side {
            SideKind::Xz => points[y],
            SideKind::Xy => points[z],
            SideKind::Yz => points[x],
        };
        configuration.push(model_polyline(&format!("{name}-cut"), flat, split, opposite)?);
        comparison.extend(realization_polylines(
            &format!("{name}-first-"),
            &realize_triangle(0.0, &sub.first)?,
        )?);
        comparison.extend(realization_polylines(
            &format!("{name}-second-"),
            &realize_triangle(0.0, &sub.second)?,
        )?);
        splits.push(GluingSplit {
            case: sub.case,
            split: sub.split,
            above,
            below,
        });
    }

    let random = check_gluing(GLUING_TRIANGLES, &GLUING_CURVATURES, Direction::Above, config.seed)?;
    lines.push(format!(
        "{} random flat triangles, split alternately on the long side and a short side (bound above):",
        random.triangles
    ));
    for t in &random.tallies {
        for (name, c) in [("long side", &t.long_side), ("short side", &t.short_side)] {
            lines.push(format!(
                "  K={} {name}: {} evaluated, {} with both pieces passing, {} whole passing, {} counterexamples",
                t.k, c.evaluated, c.both_pieces_pass, c.whole_passes, c.counterexamples
            ));
        }
    }
    let all_pass = splits.iter().all(|s| s.above.iter().chain(&s.below).all(|&b| b));
    let pass = all_pass && random.counterexamples == 0;
    lines.push(format!(
        "status: {}",
        if pass {
            "every piece and whole passes; no gluing counterexample"
        } else {
            "violations found"
        }
    ));
    Ok(ScenarioRun {
        config,
        details: ScenarioDetails::Gluing(GluingDetails { splits, random }),
        report: None,
        pass,
        lines,
        configuration,
        comparison,
    })
}

fn step(claim: &str, values: &[(&str, f64)], holds: bool) -> BonnetStep {
    BonnetStep {
        claim: claim.to_string(),
        values: values.iter().map(|&(n, v)| (n.to_string(), v)).collect(),
        holds,
    }
}

fn bonnet(config: ReproduceConfig) -> Result<ScenarioRun, CliError> {
    let (m, omega, t) = (BONNET_M, BONNET_OMEGA, bonnet_t());
    let (pt, qt) = bonnet_hinge_sides()?;
    let lhs_p = m.cos() * t.cos() - m.sin() * t.sin() * omega.cosh();
    let lhs_q = m.cos() * t.cos() + m.sin() * t.sin() * omega.cosh();
    let half_sum = 0.5 * (pt + qt);
    let half_diff = 0.5 * (pt - qt);
    let eq = |a: f64, b: f64| (a - b).abs() < 1e-12;
    let steps = vec![
        step(
            "cos(m)cos(t) - sin(m)sin(t)cosh(w) = cos(p~)",
            &[("lhs", lhs_p), ("cos(p~)", pt.cos())],
            eq(lhs_p, pt.cos()),
        ),
        step(
            "cos(m)cos(t) + sin(m)sin(t)cosh(w) = cos(q~)",
            &[("lhs", lhs_q), ("cos(q~)", qt.cos())],
            eq(lhs_q, qt.cos()),
        ),
        step("t > m + q~", &[("t", t), ("m + q~", m + qt)], t > m + qt),
        step("p~ > t + m", &[("p~", pt), ("t + m", t + m)], pt > t + m),
        step(
            "0 < 2m < p~ - q~ < pi/4",
            &[("2m", 2.0 * m), ("p~ - q~", pt - qt), ("pi/4", FRAC_PI_4)],
            0.0 < 2.0 * m && 2.0 * m < pt - qt && pt - qt < FRAC_PI_4,
        ),
        step(
            "0 < cos((p~ - q~)/2) < cos(m)",
            &[("cos((p~ - q~)/2)", half_diff.cos()), ("cos(m)", m.cos())],
            0.0 < half_diff.cos() && half_diff.cos() < m.cos(),
        ),
        step(
            "cos(m)cos(t) = (cos(p~) + cos(q~))/2 = cos((p~ + q~)/2) cos((p~ - q~)/2)",
            &[
                ("cos(m)cos(t)", m.cos() * t.cos()),
                ("(cos(p~) + cos(q~))/2", 0.5 * (pt.cos() + qt.cos())),
                ("cos((p~ + q~)/2) cos((p~ - q~)/2)", half_sum.cos() * half_diff.cos()),
            ],
            eq(m.cos() * t.cos(), 0.5 * (pt.cos() + qt.cos()))
                && eq(m.cos() * t.cos(), half_sum.cos() * half_diff.cos()),
        ),
        step("cos(t) < 0", &[("cos(t)", t.cos())], t.cos() < 0.0),
        step(
            "cos((p~ + q~)/2) = cos(t) cos(m) / cos((p~ - q~)/2) < cos(t)",
            &[("cos((p~ + q~)/2)", half_sum.cos()), ("cos(t)", t.cos())],
            half_sum.cos() < t.cos(),
        ),
        step(
            "p~ + q~ > 2t",
            &[("p~ + q~", pt + qt), ("2t", 2.0 * t)],
            pt + qt > 2.0 * t,
        ),
    ];

    let f = fixture("bonnet-myers")?;
    let fixture_diameter = check_diameter_bound(&f.space, -1.0, 1e-9);
    let fixture_axioms = f.space.validate_axioms(DEFAULT_AXIOM_TOLERANCE);
    let (a, yy, b) = (f.label("a"), f.label("y"), f.label("b"));
    let predicted = fixture_axioms.violations.iter().any(|v| v.witness == vec![a, yy, b]);

    let mut lines = vec![format!(
        "K = -1, epsilon = {BONNET_EPSILON}, m = {m}, w = {omega}, t = pi/2 + epsilon/2 = {t:.12}"
    )];
    lines.push(format!(
        "hinge sides from the law of cosines: p~ = {pt:.12}, q~ = {qt:.12}"
    ));
    for (i, s) in steps.iter().enumerate() {
        let vals = s
            .values
            .iter()
            .map(|(n, v)| format!("{n} = {v:.12}"))
            .collect::<Vec<_>>()
            .join(", ");
        lines.push(format!(
            "{}. {}: {vals} ({})",
            i + 1,
            s.claim,
            if s.holds { "holds" } else { "FAILS" }
        ));
    }
    lines.push(format!(
        "fixture: tau(a,b) = 2t = {:.12} against D_K = pi = {PI:.12}; finite diameter {:.12} ({})",
        2.0 * t,
        fixture_diameter.diameter,
        if fixture_diameter.pass {
            "within bound"
        } else {
            "exceeds bound"
        }
    ));
    lines.push(format!(
        "fixture: tau(a,y) + tau(y,b) = {:.12} > tau(a,b): reverse triangle inequality at (a, y, b) {}",
        f.space.tau(a, yy) + f.space.tau(yy, b),
        if predicted {
            "fails, as forced by p~ + q~ > 2t"
        } else {
            "unexpectedly holds"
        }
    ));
    let pass = steps.iter().all(|s| s.holds) && predicted && !fixture_diameter.pass;
    lines.push(format!(
        "status: {}",
        if pass {
            "the inequality chain holds at every step"
        } else {
            "the inequality chain breaks"
        }
    ));

    let ads = ModelSpace::new(-1.0);
    let coords = |i: usize| f.space.coords(i).expect("the fixture has coordinates");
    let (ca, cx, cy, cz, cb) = (
        coords(a),
        coords(f.label("x")),
        coords(yy),
        coords(f.label("z")),
        coords(b),
    );
    let configuration = vec![
        model_polyline("a-x", ads, ca, cx)?,
        model_polyline("x-z", ads, cx, cz)?,
        model_polyline("z-b", ads, cz, cb)?,
        model_polyline("x-y", ads, cx, cy)?,
        model_polyline("a-y", ads, ca, cy)?,
        model_polyline("y-b", ads, cy, cb)?,
    ];
    let xt = ModelPoint::ORIGIN;
    let at = ads.point_on_axis(-t)?;
    let bt = ads.point_on_axis(t)?;
    let yt = ads.point_from_origin(m, omega)?;
    let comparison = vec![
        model_polyline("hinge-a-x", ads, at, xt)?,
        model_polyline("hinge-x-y", ads, xt, yt)?,
        model_polyline("hinge-x-b", ads, xt, bt)?,
        model_polyline("p-tilde", ads, at, yt)?,
        model_polyline("q-tilde", ads, yt, bt)?,
    ];
    let details = BonnetDetails {
        epsilon: BONNET_EPSILON,
        m,
        omega,
        t,
        p_tilde: pt,
        q_tilde: qt,
        steps,
        fixture_diameter,
        fixture_axioms,
    };
    Ok(ScenarioRun {
        config,
        details: ScenarioDetails::Bonnet(details),
        report: None,
        pass,
        lines,
        configuration,
        comparison,
    })
}
