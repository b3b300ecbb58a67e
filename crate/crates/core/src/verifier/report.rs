use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::checks::{DiameterResult, NondegeneracyReport, PerimeterResult};
use super::local::LocalGlobalReport;
use super::Campaign;
use crate::comparison::{ComparisonVerdict, Direction, Formulation};
use crate::space::{AxiomReport, DiscreteSpace};

/// A check that either ran or was skipped with a reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum Outcome<T> {
    Done { result: T },
    Skipped { reason: String },
}

impl<T> Outcome<T> {
    pub fn done(result: T) -> Self {
        Outcome::Done { result }
    }

    pub fn skipped(reason: impl Into<String>) -> Self {
        Outcome::Skipped { reason: reason.into() }
    }

    pub fn result(&self) -> Option<&T> {
        match self {
            Outcome::Done { result } => Some(result),
            Outcome::Skipped { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceSummary {
    pub points: usize,
    pub relations: usize,
    pub links: usize,
    pub provenance: String,
    pub ambient: Option<String>,
    pub ambient_parameter: Option<f64>,
}

impl SpaceSummary {
    pub fn of(sp: &DiscreteSpace) -> Self {
        Self {
            points: sp.len(),
            relations: sp.relation_count(),
            links: sp.link_count(),
            provenance: sp.provenance().as_str().to_string(),
            ambient: sp.ambient().map(|a| a.kind().to_string()),
            ambient_parameter: sp.ambient().map(|a| a.parameter()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub side_mode: String,
    /// Triangles with longest side at or above this bound are excluded so
    /// that every curvature of the grid can realize them.
    pub max_longest_side: Option<f64>,
    pub requested: usize,
    pub given: usize,
    pub sampled: usize,
    /// Triples whose sides could not be built.
    pub dropped: usize,
    pub degenerate: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictEntry {
    pub formulation: Formulation,
    pub direction: Direction,
    pub k: f64,
    pub outcome: Outcome<ComparisonVerdict>,
    /// Triangles or hinges not evaluated, by reason.
    pub skip_reasons: BTreeMap<String, u64>,
}

impl VerdictEntry {
    pub fn verdict(&self) -> Option<&ComparisonVerdict> {
        self.outcome.result()
    }
}

/// Triangles passing at one curvature but failing at another that the
/// first implies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyResult {
    pub formulation: Formulation,
    pub direction: Direction,
    pub from_k: f64,
    pub to_k: f64,
    /// Triangles evaluated at both curvatures.
    pub compared: u64,
    pub passing_at_from: u64,
    pub counterexamples: u64,
    /// First counterexample triangles, in sample order.
    pub examples: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignStatus {
    pub pass: bool,
    /// "no violation found" or "violations found".
    pub summary: String,
    pub failed_checks: Vec<String>,
}

/// Worst margin of one triangle under one check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangleMargin {
    pub formulation: Formulation,
    pub direction: Direction,
    pub k: f64,
    pub triangle: [usize; 3],
    pub samples: u64,
    pub worst_margin: Option<f64>,
    pub pass: bool,
}

/// Wall-clock data, kept out of the comparable part of a report.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Runtime {
    pub jobs: Option<usize>,
    pub seconds: f64,
    pub steps: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub status: CampaignStatus,
    pub campaign: Campaign,
    pub space: SpaceSummary,
    pub axioms: Outcome<AxiomReport>,
    pub sample: SampleSummary,
    /// Global verdicts, or merged diamond verdicts for a local campaign.
    pub verdicts: Vec<VerdictEntry>,
    pub hierarchy: Outcome<Vec<HierarchyResult>>,
    pub local_vs_global: Vec<Outcome<LocalGlobalReport>>,
    pub diameter: Vec<Outcome<DiameterResult>>,
    pub perimeter: Vec<Outcome<PerimeterResult>>,
    pub nondegeneracy: Vec<Outcome<NondegeneracyReport>>,
    #[serde(skip)]
    pub margins: Vec<TriangleMargin>,
    #[serde(skip)]
    pub runtime: Runtime,
}

impl VerificationReport {
    pub fn verdict(&self, f: Formulation, d: Direction, k: f64) -> Option<&ComparisonVerdict> {
        self.verdicts
            .iter()
            .find(|e| e.formulation == f && e.direction == d && e.k == k)
            .and_then(VerdictEntry::verdict)
    }

    pub(crate) fn assess(&mut self) {
        let mut failed = Vec::new();
        if let Some(a) = self.axioms.result() {
            if !a.pass {
                failed.push("axioms".to_string());
            }
        }
        for e in &self.verdicts {
            if e.verdict().is_some_and(|v| !v.pass) {
                failed.push(format!("{} {} K={}", e.formulation.as_str(), e.direction.as_str(), e.k));
            }
        }
        if let Some(h) = self.hierarchy.result() {
            for r in h.iter().filter(|r| r.counterexamples > 0) {
                failed.push(format!(
                    "hierarchy {} {} K={} to K={}",
                    r.formulation.as_str(),
                    r.direction.as_str(),
                    r.from_k,
                    r.to_k
                ));
            }
        }
        for r in self.local_vs_global.iter().filter_map(Outcome::result) {
            if !r.implication_held || !r.restriction_held {
                failed.push(format!("local-vs-global K={}", r.k));
            }
        }
        for r in self.diameter.iter().filter_map(Outcome::result) {
            if !r.pass {
                failed.push(format!("diameter K={}", r.k));
            }
        }
        for r in self.perimeter.iter().filter_map(Outcome::result) {
            if !r.pass {
                failed.push(format!("perimeter K={}", r.k));
            }
        }
        for r in self.nondegeneracy.iter().filter_map(Outcome::result) {
            if !r.pass {
                failed.push(format!("nondegeneracy K={}", r.k));
            }
        }
        let pass = failed.is_empty();
        self.status = CampaignStatus {
            pass,
            summary: if pass { "no violation found" } else { "violations found" }.to_string(),
            failed_checks: failed,
        };
    }
}
