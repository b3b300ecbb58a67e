use std::path::Path;
use std::process::{Command, Output};

use lorcomp_cli::report::{comparable, REPORT_HEADER, RUNTIME_MARKER};

fn lorcomp(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lorcomp"))
        .current_dir(dir)
        .env_remove("LORCOMP_SEED")
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn report_json(path: &Path) -> serde_json::Value {
    let text = std::fs::read_to_string(path).unwrap();
    let body = comparable(&text);
    serde_json::from_str(body.strip_prefix(REPORT_HEADER).unwrap()).unwrap()
}

#[test]
fn generate_writes_the_requested_points() {
    let dir = tempfile::tempdir().unwrap();
    let o = lorcomp(
        dir.path(),
        &[
            "generate",
            "--ambient",
            "minkowski",
            "--diamond",
            "0,0:4,0",
            "--count",
            "500",
            "--seed",
            "42",
            "-o",
            "m.cset",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("500 points"));
    let text = std::fs::read_to_string(dir.path().join("m.cset")).unwrap();
    assert!(text.starts_with("lorcomp-cset v1\n"));
    assert!(text.contains("\npoints 500\n"));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    lorcomp(
        d,
        &[
            "generate",
            "--ambient",
            "minkowski",
            "--count",
            "300",
            "--seed",
            "42",
            "-o",
            "m.cset",
        ],
    );
    lorcomp(
        d,
        &["generate", "--fixture", "cylinder-counterexample", "-o", "cyl.cset"],
    );
    lorcomp(
        d,
        &[
            "generate",
            "--ambient",
            "ads",
            "--count",
            "500",
            "--seed",
            "7",
            "-o",
            "ads.cset",
        ],
    );

    let o = lorcomp(d, &["verify", "m.cset", "--K", "0", "--direction", "both"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = lorcomp(d, &["verify", "cyl.cset", "--K", "0", "--direction", "above"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness:"));

    let o = lorcomp(d, &["verify", "ads.cset", "--K", "-1", "--diameter"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report_json(&d.join("ads.report"));
    let diam = &r["report"]["diameter"][0]["result"];
    assert!(diam["diameter"].as_f64().unwrap() <= std::f64::consts::PI);
    assert_eq!(diam["pass"], true);
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for args in [
        &[
            "generate",
            "--ambient",
            "ads",
            "--diamond",
            "0,0:9,0",
            "--count",
            "5",
            "-o",
            "x.cset",
        ][..],
        &["generate", "--ambient", "minkowski", "-o", "x.cset"],
        &["generate", "--fixture", "no-such-fixture", "-o", "x.cset"],
        &["verify", "missing.cset"],
        &["verify", "--fixture-is-not-a-flag"],
        &["reproduce", "torus"],
    ] {
        let o = lorcomp(d, args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    std::fs::write(d.join("bad.toml"), "[space]\nfixture = \"gluing-basic\"\ncolour = 3\n").unwrap();
    assert_eq!(lorcomp(d, &["verify", "--config", "bad.toml"]).status.code(), Some(2));
}

#[test]
fn config_file_drives_a_campaign() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let config = r#"
curvatures = [-1.0, -0.5]
directions = ["below"]
formulations = ["triangle", "hinge"]

[space.sprinkle]
ambient = "ads"
count = 300

[budgets]
triangles = 60
pairs_per_triangle = 32

[checks]
perimeter = true

[output]
report = "out/run.report"
margins = "out/margins.csv"
"#;
    std::fs::write(d.join("run.toml"), config).unwrap();
    let o = lorcomp(d, &["verify", "--config", "run.toml", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r = report_json(&d.join("out/run.report"));
    // Defaults are written out in full.
    assert_eq!(r["config"]["seed"], 5);
    assert_eq!(r["config"]["space"]["sprinkle"]["seed"], 5);
    assert!(r["config"]["tolerances"]["tau"].is_number());
    assert_eq!(r["report"]["verdicts"].as_array().unwrap().len(), 4);
    let csv = std::fs::read_to_string(d.join("out/margins.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("formulation,direction,k,x,y,z,samples,worst_margin,pass")
    );
    assert_eq!(lines.count(), 4 * 60);
}

#[test]
fn seed_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let run = |out: &str, seed: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_lorcomp"));
        cmd.current_dir(d).env_remove("LORCOMP_SEED");
        if let Some(s) = seed {
            cmd.env("LORCOMP_SEED", s);
        }
        cmd.args(["generate", "--ambient", "desitter", "--count", "50", "-o", out]);
        assert_eq!(cmd.output().unwrap().status.code(), Some(0));
        std::fs::read_to_string(d.join(out)).unwrap()
    };
    let by_env = run("a.cset", Some("17"));
    let flag = lorcomp(
        d,
        &[
            "generate",
            "--ambient",
            "desitter",
            "--count",
            "50",
            "--seed",
            "17",
            "-o",
            "b.cset",
        ],
    );
    assert_eq!(flag.status.code(), Some(0));
    assert_eq!(by_env, std::fs::read_to_string(d.join("b.cset")).unwrap());
    assert_ne!(by_env, run("c.cset", None));

    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lorcomp"));
    cmd.current_dir(d).env("LORCOMP_SEED", "seventeen").args([
        "generate",
        "--ambient",
        "desitter",
        "--count",
        "5",
        "-o",
        "d.cset",
    ]);
    assert_eq!(cmd.output().unwrap().status.code(), Some(2));
}

#[test]
fn reproduce_writes_reports_and_polylines() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = lorcomp(d, &["reproduce", "gluing", "--out-dir", "plots"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = lorcomp(d, &["reproduce", "bonnet", "--out-dir", "plots"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("0 < 2m < p~ - q~ < pi/4"));
    assert!(out.contains("cos(t) < 0"));
    for stem in ["gluing", "bonnet"] {
        let text = std::fs::read_to_string(d.join(format!("plots/{stem}.report"))).unwrap();
        assert!(text.starts_with(REPORT_HEADER));
        assert!(text.contains(&format!("\n{RUNTIME_MARKER}\n")));
        for suffix in ["configuration", "comparison"] {
            let csv = std::fs::read_to_string(d.join(format!("plots/{stem}-{suffix}.csv"))).unwrap();
            assert!(csv.starts_with("polyline,vertex,t,x\n"));
            assert!(csv.lines().count() > 1);
        }
    }
    let r = report_json(&d.join("plots/gluing.report"));
    assert_eq!(r["scenario"]["gluing"]["random"]["counterexamples"], 0);
}

#[test]
fn cylinder_prints_both_geodesics() {
    let dir = tempfile::tempdir().unwrap();
    let o = lorcomp(dir.path(), &["reproduce", "cylinder"]);
    assert_eq!(o.status.code(), Some(1));
    let csv = std::fs::read_to_string(dir.path().join("cylinder-configuration.csv")).unwrap();
    let names: std::collections::BTreeSet<&str> = csv.lines().skip(1).filter_map(|l| l.split(',').next()).collect();
    assert!(names.len() >= 2, "{names:?}");
    let r = report_json(&dir.path().join("cylinder.report"));
    let c = &r["scenario"]["cylinder"];
    assert_eq!(c["windings"].as_array().unwrap().len(), 2);
    assert!(!c["left_geodesic"].as_array().unwrap().is_empty());
    assert!(!c["right_geodesic"].as_array().unwrap().is_empty());
}
