//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits non-zero if any fails.
//!
//! `cargo test -p lorcomp-cli --test acceptance`

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use lorcomp::comparison::{Comparator, ComparisonConfiguration, Direction, Formulation, Site};
use lorcomp::generators::{sprinkle, Amount, SprinkleSpec};
use lorcomp::space::DEFAULT_AXIOM_TOLERANCE;
use lorcomp::verifier::{check_gluing, run_campaign_on, Campaign, Checks, SpaceSource, VerificationReport};
use lorcomp::{Ambient, DiscreteSpace, HingeOrientation, ModelPoint, ModelSpace, TriangleSides, VertexRole};
use lorcomp_cli::report::comparable;
use lorcomp_cli::reproduce::{GLUING_CURVATURES, GLUING_TRIANGLES};

const AXIOM_SPRINKLES: u64 = 50;
const AXIOM_MAX_POINTS: usize = 2000;
const AXIOM_BUDGET: Duration = Duration::from_secs(60);

const MODEL_TRIPLES: usize = 10_000;
const ROUND_TRIP_TOL: f64 = 1e-9;
const CONTINUITY_K: f64 = 1e-6;
const CONTINUITY_TOL: f64 = 1e-4;

const FLAT_POINTS: usize = 1000;
const FLAT_MARGIN: f64 = 1e-6;
const FLAT_MIN_PAIRS: u64 = 100_000;
const FLAT_BUDGET: Duration = Duration::from_secs(120);

const ADS_POINTS: usize = 1000;
const ADS_MARGIN: f64 = 1e-5;
const BONNET_TOL: f64 = 1e-9;

const HIERARCHY_KS: [f64; 2] = [-0.5, -0.1];

const ANGLE_HINGES: usize = 500;
const ANGLE_LEVELS: usize = 6;
const ANGLE_TOL: f64 = 1e-6;
const EQUAL_ANGLE_TOL: f64 = 1e-3;

const CYLINDER_TAU_BAR: f64 = 0.5;

const SEED: u64 = 20240601;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn model_spec(k: f64, count: usize, seed: u64) -> SprinkleSpec {
    let ambient = Ambient::model(ModelSpace::new(k));
    SprinkleSpec::new(
        ambient,
        SprinkleSpec::default_region(&ambient),
        Amount::Count(count),
        seed,
    )
}

fn ambient_by_index(i: u64) -> Ambient {
    match i % 4 {
        0 => Ambient::model(ModelSpace::minkowski()),
        1 => Ambient::model(ModelSpace::new(-1.0)),
        2 => Ambient::model(ModelSpace::new(1.0)),
        _ => Ambient::cylinder(2.0 * PI),
    }
}

fn axioms() -> Check {
    let start = Instant::now();
    let mut largest = 0;
    for i in 0..AXIOM_SPRINKLES {
        let ambient = ambient_by_index(i);
        let count = AXIOM_MAX_POINTS - 300 * (i as usize / 4 % 5);
        let spec = SprinkleSpec::new(ambient, SprinkleSpec::default_region(&ambient), Amount::Count(count), i);
        let sp = sprinkle(&spec).map_err(|e| e.to_string())?;
        let r = sp.validate_axioms(DEFAULT_AXIOM_TOLERANCE);
        ensure(r.pass, || {
            format!("sprinkle {i} ({}) has {} violations", ambient.kind(), r.violation_count)
        })?;
        largest = largest.max(sp.len());
    }
    let elapsed = start.elapsed();
    ensure(elapsed < AXIOM_BUDGET, || format!("took {elapsed:.1?}"))?;
    Ok(format!(
        "{AXIOM_SPRINKLES} sprinkles up to {largest} points in {elapsed:.1?}"
    ))
}

/// Time separation from embedding coordinates.
fn oracle_tau(k: f64, p: ModelPoint, q: ModelPoint) -> f64 {
    if k == 0.0 {
        let (dt, dx) = (q.time - p.time, q.space - p.space);
        return (dt * dt - dx * dx).sqrt();
    }
    if k < 0.0 {
        let e = |m: ModelPoint| {
            [
                m.time.cos() / m.space.cos(),
                m.time.sin() / m.space.cos(),
                m.space.tan(),
            ]
        };
        let (a, b) = (e(p), e(q));
        (a[0] * b[0] + a[1] * b[1] - a[2] * b[2]).clamp(-1.0, 1.0).acos()
    } else {
        let e = |m: ModelPoint| [m.time.tan(), m.space.cos() / m.time.cos(), m.space.sin() / m.time.cos()];
        let (a, b) = (e(p), e(q));
        (-a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).max(1.0).acosh()
    }
}

fn random_sides(rng: &mut impl Rng) -> TriangleSides {
    let a = rng.random_range(0.05..1.2);
    let b = rng.random_range(0.05..1.2);
    let d = rng.random_range(1e-3..0.6);
    TriangleSides::new(a, b, a + b + d)
}

fn model_consistency() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut side_err, mut angle_err, mut cont_err) = (0f64, 0f64, 0f64);
    let roles = [VertexRole::Past, VertexRole::Middle, VertexRole::Future];
    for k in [-1.0, 0.0, 1.0] {
        let m = ModelSpace::new(k);
        for _ in 0..MODEL_TRIPLES {
            let s = random_sides(&mut rng);
            let cfg = ComparisonConfiguration::from_sides(k, s).map_err(|e| format!("K={k} {s:?}: {e}"))?;
            let [x, y, z] = cfg.vertices;
            for (got, want) in [
                (oracle_tau(k, x, y), s.a),
                (oracle_tau(k, y, z), s.b),
                (oracle_tau(k, x, z), s.c),
            ] {
                side_err = side_err.max((got - want).abs());
            }
            let angle = |role| m.comparison_angle(s, role).map_err(|e| e.to_string());
            let (ax, ay, az) = (
                angle(VertexRole::Past)?,
                angle(VertexRole::Middle)?,
                angle(VertexRole::Future)?,
            );
            let lc = |p, q, w, o| m.law_of_cosines(p, q, w, o).map_err(|e| e.to_string());
            angle_err = angle_err
                .max((lc(s.a, s.c, ax, HingeOrientation::Same)? - s.b).abs())
                .max((lc(s.a, s.b, ay, HingeOrientation::Mixed)? - s.c).abs())
                .max((lc(s.b, s.c, az, HingeOrientation::Same)? - s.a).abs());
            if k == 0.0 {
                for role in roles {
                    let flat = angle(role)?;
                    for kk in [-CONTINUITY_K, CONTINUITY_K] {
                        let near = ModelSpace::new(kk)
                            .comparison_angle(s, role)
                            .map_err(|e| e.to_string())?;
                        cont_err = cont_err.max((near - flat).abs());
                    }
                }
            }
        }
    }
    ensure(side_err < ROUND_TRIP_TOL, || {
        format!("realization error {side_err:.2e}")
    })?;
    ensure(angle_err < ROUND_TRIP_TOL, || {
        format!("law of cosines error {angle_err:.2e}")
    })?;
    ensure(cont_err < CONTINUITY_TOL, || {
        format!("K→0 discontinuity {cont_err:.2e}")
    })?;
    Ok(format!(
        "{MODEL_TRIPLES} triples per K: sides {side_err:.1e}, law of cosines {angle_err:.1e}, K→0 {cont_err:.1e}"
    ))
}

fn campaign(source: SpaceSource, ks: Vec<f64>, formulations: Vec<Formulation>) -> Campaign {
    let mut c = Campaign::new(source, ks, SEED);
    c.formulations = formulations;
    c
}

fn max_abs_margin(r: &VerificationReport) -> Result<f64, String> {
    let mut worst = 0f64;
    for e in &r.verdicts {
        let v = e.verdict().ok_or_else(|| {
            format!(
                "{} {} K={} was skipped",
                e.formulation.as_str(),
                e.direction.as_str(),
                e.k
            )
        })?;
        ensure(v.pass, || {
            format!("{} {} K={} fails", e.formulation.as_str(), e.direction.as_str(), e.k)
        })?;
        worst = worst.max(v.worst_margin.map_or(0.0, f64::abs));
    }
    Ok(worst)
}

fn flat_exactness() -> Check {
    let start = Instant::now();
    let spec = model_spec(0.0, FLAT_POINTS, SEED);
    let sp = sprinkle(&spec).map_err(|e| e.to_string())?;
    let c = campaign(
        SpaceSource::Sprinkle { spec },
        vec![0.0],
        vec![Formulation::Triangle, Formulation::Monotonicity, Formulation::Hinge],
    );
    let r = run_campaign_on(&c, &sp, None).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let worst = max_abs_margin(&r)?;
    // Pairs are counted once per direction; both directions share them.
    let pairs: u64 = r
        .verdicts
        .iter()
        .filter(|e| e.direction == Direction::Above)
        .filter_map(|e| e.verdict())
        .map(|v| v.samples)
        .sum();
    ensure(worst < FLAT_MARGIN, || format!("|margin| reaches {worst:.2e}"))?;
    ensure(pairs >= FLAT_MIN_PAIRS, || format!("only {pairs} pairs"))?;
    ensure(elapsed < FLAT_BUDGET, || format!("took {elapsed:.1?}"))?;
    Ok(format!("{pairs} pairs, max |margin| {worst:.1e}, {elapsed:.1?}"))
}

/// The anti-de Sitter campaign shared by several criteria.
fn ads_run() -> &'static Result<(DiscreteSpace, VerificationReport), String> {
    static RUN: OnceLock<Result<(DiscreteSpace, VerificationReport), String>> = OnceLock::new();
    RUN.get_or_init(|| {
        let spec = model_spec(-1.0, ADS_POINTS, SEED);
        let sp = sprinkle(&spec).map_err(|e| e.to_string())?;
        let mut ks = vec![-1.0];
        ks.extend(HIERARCHY_KS);
        let mut c = campaign(SpaceSource::Sprinkle { spec }, ks, Formulation::ALL.to_vec());
        c.checks = Checks {
            axioms: true,
            diameter: true,
            perimeter: true,
            nondegeneracy: true,
            hierarchy: true,
        };
        let r = run_campaign_on(&c, &sp, None).map_err(|e| e.to_string())?;
        Ok((sp, r))
    })
}

fn ads_bounds() -> Check {
    let (_, r) = ads_run().as_ref().map_err(Clone::clone)?;
    let mut worst = 0f64;
    let mut samples = 0;
    for d in [Direction::Above, Direction::Below] {
        for f in Formulation::ALL {
            let v = r
                .verdict(f, d, -1.0)
                .ok_or_else(|| format!("{} {} missing", f.as_str(), d.as_str()))?;
            ensure(v.pass, || {
                format!("{} {} fails (worst {:?})", f.as_str(), d.as_str(), v.worst_margin)
            })?;
            worst = worst.max(v.worst_margin.map_or(0.0, f64::abs));
            samples += v.samples;
        }
    }
    ensure(worst < ADS_MARGIN, || format!("|margin| reaches {worst:.2e}"))?;
    Ok(format!("{samples} samples at K=-1, max |margin| {worst:.1e}"))
}

fn bonnet_myers() -> Check {
    let (sp, r) = ads_run().as_ref().map_err(Clone::clone)?;
    let diameter = sp.finite_diameter();
    ensure(diameter <= PI + BONNET_TOL, || format!("finite diameter {diameter}"))?;
    let p = r
        .perimeter
        .iter()
        .filter_map(|o| o.result())
        .find(|p| p.k == -1.0)
        .ok_or("no perimeter check at K=-1")?;
    let largest = p.max_perimeter.ok_or("no triangle sampled")?;
    ensure(largest < 2.0 * PI + BONNET_TOL, || format!("perimeter {largest}"))?;
    ensure(p.triangles > 0, || "no perimeter samples".into())?;
    Ok(format!(
        "finite diameter {diameter:.4} ≤ π, largest of {} perimeters {largest:.4} < 2π",
        p.triangles
    ))
}

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lorcomp"))
}

fn read_report(path: &Path) -> Result<Value, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let body = comparable(&text);
    let json = body.split_once('\n').ok_or("empty report")?.1;
    serde_json::from_str(json).map_err(|e| e.to_string())
}

fn cylinder() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |local: bool| {
        let mut cmd = cli();
        cmd.current_dir(dir.path()).arg("reproduce").arg("cylinder");
        if local {
            cmd.arg("--local");
        }
        cmd.output().map_err(|e| e.to_string())
    };
    let global = run(false)?;
    ensure(global.status.code() == Some(1), || {
        format!("global exit {:?}", global.status.code())
    })?;
    let rep = read_report(&dir.path().join("cylinder.report"))?;
    let details = &rep["scenario"]["cylinder"];
    ensure(details["degenerate"] == Value::Bool(true), || {
        "triangle is not degenerate".into()
    })?;
    let w = &details["witness"];
    let (tau, tau_bar) = (
        w["tau"].as_f64().ok_or("no witness")?,
        w["tau_bar"].as_f64().ok_or("no witness")?,
    );
    ensure(tau == 0.0 && tau_bar > CYLINDER_TAU_BAR, || {
        format!("witness τ = {tau}, τ̄ = {tau_bar}")
    })?;

    let local = run(true)?;
    ensure(local.status.code() == Some(0), || {
        format!("local exit {:?}", local.status.code())
    })?;
    let rep = read_report(&dir.path().join("cylinder-local.report"))?;
    let lg = &rep["report"]["local_vs_global"][0]["result"];
    ensure(lg["k"].as_f64() == Some(0.0), || "local check not at K=0".into())?;
    ensure(lg["local_pass"] == Value::Bool(true), || "local diamonds fail".into())?;
    let evaluated = lg["diamonds"]
        .as_array()
        .map_or(0, |d| d.iter().filter(|x| x["verdict"].is_object()).count());
    ensure(evaluated > 0, || "no diamond was evaluated".into())?;
    Ok(format!(
        "τ = 0, τ̄ = {tau_bar:.3}; exit 1 globally, exit 0 on {evaluated} diamonds"
    ))
}

fn gluing() -> Check {
    let r = check_gluing(GLUING_TRIANGLES, &GLUING_CURVATURES, Direction::Above, SEED).map_err(|e| e.to_string())?;
    let mut both = 0;
    let mut evaluated = 0;
    for t in &r.tallies {
        for c in [&t.long_side, &t.short_side] {
            both += c.both_pieces_pass;
            evaluated += c.evaluated;
        }
    }
    ensure(r.counterexamples == 0, || {
        format!("{} counterexamples", r.counterexamples)
    })?;
    ensure(both > 0, || "no subdivision with two passing pieces".into())?;
    Ok(format!(
        "{} triangles, {evaluated} evaluations, {both} with both pieces passing, 0 counterexamples",
        r.triangles
    ))
}

fn hierarchy() -> Check {
    let (_, r) = ads_run().as_ref().map_err(Clone::clone)?;
    let h = r.hierarchy.result().ok_or("hierarchy skipped")?;
    let mut passing = 0;
    for to in HIERARCHY_KS {
        for f in Formulation::ALL {
            let x = h
                .iter()
                .find(|x| x.formulation == f && x.direction == Direction::Below && x.from_k == -1.0 && x.to_k == to)
                .ok_or_else(|| format!("no {} comparison to K={to}", f.as_str()))?;
            ensure(x.counterexamples == 0, || {
                format!(
                    "{} below K=-1 to K={to}: {} counterexamples",
                    f.as_str(),
                    x.counterexamples
                )
            })?;
            passing += x.passing_at_from;
        }
    }
    ensure(passing > 0, || "no triangle passes below at K=-1".into())?;
    Ok(format!(
        "{passing} passing triangle checks carried to K ∈ {{-0.5, -0.1}}, 0 counterexamples"
    ))
}

/// Unsigned hyperbolic angle between the tangents from `v` to `a` and `b`.
fn exact_flat_angle(v: ModelPoint, a: ModelPoint, b: ModelPoint) -> f64 {
    let unit = |p: ModelPoint| {
        let (dt, dx) = (p.time - v.time, p.space - v.space);
        let n = (dt * dt - dx * dx).sqrt();
        (dt / n, dx / n)
    };
    let (u, w) = (unit(a), unit(b));
    (u.0 * w.0 - u.1 * w.1).abs().acosh()
}

fn angle_limit() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0f64;
    let flat = Ambient::model(ModelSpace::minkowski());
    for i in 0..ANGLE_HINGES {
        let v = ModelPoint::new(0.0, 0.0);
        let leg = |rng: &mut ChaCha8Rng, sign: f64| {
            let (len, w): (f64, f64) = (rng.random_range(0.2..2.0), rng.random_range(-1.5..1.5));
            ModelPoint::new(sign * len * w.cosh(), len * w.sinh())
        };
        // Alternate same and mixed orientations.
        let a = leg(&mut rng, 1.0);
        let b = leg(&mut rng, if i % 2 == 0 { 1.0 } else { -1.0 });
        let sp = DiscreteSpace::from_ambient(vec![v, a, b], flat).map_err(|e| e.to_string())?;
        let c = Comparator::new(&sp);
        let h = c
            .hinge(Site::Sample(0), Site::Sample(1), Site::Sample(2))
            .map_err(|e| e.to_string())?;
        let m = c.measure_angle(&h).map_err(|e| e.to_string())?;
        ensure(m.levels.len() == ANGLE_LEVELS, || format!("{} levels", m.levels.len()))?;
        worst = worst.max((m.angle - exact_flat_angle(v, a, b)).abs());
    }
    ensure(worst < ANGLE_TOL, || format!("extrapolation error {worst:.2e}"))?;

    let (_, r) = ads_run().as_ref().map_err(Clone::clone)?;
    let n = r
        .nondegeneracy
        .iter()
        .filter_map(|o| o.result())
        .next()
        .ok_or("equal-angle check skipped")?;
    let diff = n.max_angle_difference.ok_or("no configuration measured")?;
    ensure(diff < EQUAL_ANGLE_TOL, || format!("angles differ by {diff:.2e}"))?;
    Ok(format!(
        "flat error {worst:.1e} on {ANGLE_HINGES} hinges; anti-de Sitter angles agree to {diff:.1e} over {} configurations",
        n.configurations
    ))
}

fn run_in(dir: &Path, args: &[&str]) -> Result<i32, String> {
    let out = cli().current_dir(dir).args(args).output().map_err(|e| e.to_string())?;
    out.status.code().ok_or_else(|| "killed".into())
}

fn determinism() -> Check {
    let dirs = [
        tempfile::tempdir().map_err(|e| e.to_string())?,
        tempfile::tempdir().map_err(|e| e.to_string())?,
    ];
    let jobs = ["1", "2"];
    for (dir, jobs) in dirs.iter().zip(jobs) {
        let d = dir.path();
        run_in(
            d,
            &[
                "generate",
                "--ambient",
                "ads",
                "--count",
                "600",
                "--seed",
                "7",
                "-o",
                "ads.cset",
            ],
        )?;
        let code = run_in(
            d,
            &[
                "verify",
                "ads.cset",
                "--K",
                "-1,0",
                "--direction",
                "both",
                "--diameter",
                "--perimeter",
                "--seed",
                "3",
                "--jobs",
                jobs,
            ],
        )?;
        ensure(code == 1, || format!("verify exit {code}"))?;
        for name in ["cylinder", "gluing", "bonnet"] {
            run_in(d, &["reproduce", name, "--jobs", jobs])?;
        }
    }
    let files = [
        "ads.cset",
        "ads.report",
        "cylinder.report",
        "cylinder-configuration.csv",
        "gluing.report",
        "bonnet.report",
        "bonnet-comparison.csv",
    ];
    for f in files {
        let read = |d: &tempfile::TempDir| std::fs::read_to_string(d.path().join(f)).map_err(|e| format!("{f}: {e}"));
        let (a, b) = (read(&dirs[0])?, read(&dirs[1])?);
        ensure(comparable(&a) == comparable(&b), || format!("{f} differs between runs"))?;
    }
    Ok(format!(
        "{} files identical across two runs with different --jobs",
        files.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("axioms", axioms),
        ("model consistency", model_consistency),
        ("flat exactness", flat_exactness),
        ("anti-de Sitter bounds", ads_bounds),
        ("finite diameter", bonnet_myers),
        ("cylinder counterexample", cylinder),
        ("gluing", gluing),
        ("hierarchy", hierarchy),
        ("angle limit", angle_limit),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(e) => {
                failed += 1;
                ("FAIL", e)
            }
        };
        println!(
            "criterion {:>2} {name:<24} {tag}  {detail} [{:.1?}]",
            i + 1,
            start.elapsed()
        );
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
