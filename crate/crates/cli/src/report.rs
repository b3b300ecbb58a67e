//! The `lorcomp-report v1` format and the margins CSV.
//!
//! A report is the header line, a pretty-printed JSON body with a fixed
//! field order, and a trailing runtime section:
//!
//! ```text
//! lorcomp-report v1
//! { "command": ..., "config": ..., "report": ..., "scenario": ... }
//! # runtime
//! {"jobs":1,"seconds":0.42,"steps":[["axioms",0.1]]}
//! ```
//!
//! Everything above `# runtime` depends only on the configuration, so two
//! runs with the same seed agree byte for byte there.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use lorcomp::comparison::{ComparisonVerdict, Site, Witness};
use lorcomp::verifier::{Outcome, Runtime, TriangleMargin, VerificationReport};

use crate::CliError;

pub const REPORT_HEADER: &str = "lorcomp-report v1";
pub const RUNTIME_MARKER: &str = "# runtime";

#[derive(Serialize)]
struct Body<'a, C: Serialize, S: Serialize> {
    command: &'a str,
    config: &'a C,
    report: Option<&'a VerificationReport>,
    scenario: Option<&'a S>,
}

pub fn render_report<C: Serialize, S: Serialize>(
    command: &str,
    config: &C,
    report: Option<&VerificationReport>,
    scenario: Option<&S>,
    runtime: &Runtime,
) -> Result<String, CliError> {
    let body = Body {
        command,
        config,
        report,
        scenario,
    };
    let json = serde_json::to_string_pretty(&body).map_err(|e| CliError::Config(e.to_string()))?;
    let rt = serde_json::to_string(runtime).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(format!("{REPORT_HEADER}\n{json}\n{RUNTIME_MARKER}\n{rt}\n"))
}

/// The part of a report that excludes the runtime section.
pub fn comparable(report: &str) -> &str {
    match report.find(&format!("\n{RUNTIME_MARKER}\n")) {
        Some(i) => &report[..i + 1],
        None => report,
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn margins_csv(margins: &[TriangleMargin]) -> String {
    let mut s = String::from("formulation,direction,k,x,y,z,samples,worst_margin,pass\n");
    for m in margins {
        let [x, y, z] = m.triangle;
        let _ = writeln!(
            s,
            "{},{},{},{x},{y},{z},{},{},{}",
            m.formulation.as_str(),
            m.direction.as_str(),
            m.k,
            m.samples,
            opt(m.worst_margin),
            m.pass
        );
    }
    s
}

pub fn site(s: &Site) -> String {
    match s {
        Site::Sample(i) => format!("#{i}"),
        Site::Ambient(p) => format!("({:.6}, {:.6})", p.time, p.space),
    }
}

pub fn witness(w: &Witness) -> String {
    let point = |p: &lorcomp::comparison::WitnessPoint| match p.side {
        Some(side) => format!("{} on {} at {:.4}", site(&p.site), side.as_str(), p.fraction),
        None => site(&p.site),
    };
    format!(
        "triangle ({}, {}, {}){}: p = {}, q = {}, value {:.6}, model value {:.6}, margin {:.3e}",
        site(&w.triangle[0]),
        site(&w.triangle[1]),
        site(&w.triangle[2]),
        if w.degenerate { " degenerate" } else { "" },
        point(&w.first),
        point(&w.second),
        w.value,
        w.model_value,
        w.margin
    )
}

fn verdict_line(label: &str, v: &ComparisonVerdict) -> String {
    let worst = v
        .worst_margin
        .map(|m| format!("{m:.3e}"))
        .unwrap_or_else(|| "none".into());
    if v.pass {
        format!(
            "{label}: no violation found (worst margin {worst}, {} samples on {} triangles)",
            v.samples, v.triangles
        )
    } else {
        format!(
            "{label}: VIOLATION in {} of {} samples (worst margin {worst})",
            v.violations, v.samples
        )
    }
}

/// Human-readable summary lines of a verification report.
pub fn summary(r: &VerificationReport) -> Vec<String> {
    let mut out = Vec::new();
    let sp = &r.space;
    out.push(format!(
        "space: {} points, {} links, {}{}",
        sp.points,
        sp.links,
        sp.provenance,
        sp.ambient.as_ref().map(|a| format!(" {a}")).unwrap_or_default()
    ));
    match &r.axioms {
        Outcome::Done { result } => out.push(format!(
            "axioms: {} ({} triples, {} violations)",
            if result.pass { "pass" } else { "FAIL" },
            result.triples_checked,
            result.violation_count
        )),
        Outcome::Skipped { reason } => out.push(format!("axioms: skipped ({reason})")),
    }
    for e in &r.verdicts {
        let label = format!("{} {} K={}", e.formulation.as_str(), e.direction.as_str(), e.k);
        match &e.outcome {
            Outcome::Done { result } => {
                out.push(verdict_line(&label, result));
                if !result.pass {
                    for w in result.witnesses.iter().take(3) {
                        out.push(format!("  witness: {}", witness(w)));
                    }
                }
            }
            Outcome::Skipped { reason } => out.push(format!("{label}: skipped ({reason})")),
        }
    }
    if let Some(h) = r.hierarchy.result() {
        for x in h {
            out.push(format!(
                "hierarchy {} {} K={} to K={}: {} of {} passing triangles fail",
                x.formulation.as_str(),
                x.direction.as_str(),
                x.from_k,
                x.to_k,
                x.counterexamples,
                x.passing_at_from
            ));
        }
    }
    for l in r.local_vs_global.iter().filter_map(Outcome::result) {
        out.push(format!(
            "local vs global K={}: local {}, global {}, unique maximizers {} ({} of {} pairs tied), implication {}",
            l.k,
            if l.local_pass { "pass" } else { "fail" },
            if l.global_pass { "pass" } else { "fail" },
            if l.uniqueness.holds { "yes" } else { "no" },
            l.uniqueness.non_unique,
            l.uniqueness.pairs,
            if l.hypotheses_hold {
                if l.implication_held {
                    "held"
                } else {
                    "FAILED"
                }
            } else {
                "vacuous"
            }
        ));
        if let Some(g) = l.global.as_ref().filter(|g| !g.pass) {
            if let Some(w) = g.witnesses.first() {
                out.push(format!("  global witness: {}", witness(w)));
            }
        }
    }
    for d in r.diameter.iter().filter_map(Outcome::result) {
        out.push(format!(
            "diameter K={}: {:.9} vs D_K = {:.9} ({})",
            d.k,
            d.diameter,
            d.bound,
            if d.pass { "within bound" } else { "EXCEEDS BOUND" }
        ));
    }
    for p in r.perimeter.iter().filter_map(Outcome::result) {
        out.push(format!(
            "perimeter K={}: largest {} of {} triangles vs 2 D_K = {:.9} ({})",
            p.k,
            p.max_perimeter
                .map(|m| format!("{m:.9}"))
                .unwrap_or_else(|| "none".into()),
            p.triangles,
            p.bound,
            if p.pass { "within bound" } else { "EXCEEDS BOUND" }
        ));
    }
    for n in r.nondegeneracy.iter().filter_map(Outcome::result) {
        out.push(format!(
            "sub-triangle non-degeneracy K={}: {} configurations, {} degenerate sub-triangles, {} angle mismatches ({})",
            n.k,
            n.configurations,
            n.degenerate_subtriangles,
            n.angle_mismatches,
            if n.pass { "pass" } else { "FAIL" }
        ));
    }
    out.push(format!("status: {}", r.status.summary));
    for f in &r.status.failed_checks {
        out.push(format!("  failed: {f}"));
    }
    out
}
