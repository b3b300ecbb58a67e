use serde::{Deserialize, Serialize};

use super::DiscreteSpace;

/// Absolute slack on `τ` comparisons in axiom checks.
pub const DEFAULT_AXIOM_TOLERANCE: f64 = 1e-9;

/// Witnesses kept per report; the count of violations is always exact.
const WITNESS_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxiomKind {
    /// `x ≤ y ≤ x` for distinct points.
    CausalCycle,
    /// `x ≤ y ≤ z` without `x ≤ z`.
    NonTransitiveCausal,
    /// `τ(x, y) > 0` for a pair that is not causally related.
    TimelikeNotCausal,
    /// `τ(x, y) > 0` and `τ(y, x) > 0`.
    TauNotAntisymmetric,
    /// `τ(x, z) < τ(x, y) + τ(y, z)` on a causal chain.
    ReverseTriangle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomViolation {
    pub kind: AxiomKind,
    pub witness: Vec<usize>,
    /// For the reverse triangle inequality, `τ(x,z) - τ(x,y) - τ(y,z)`;
    /// otherwise the offending `τ` value or zero.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub pass: bool,
    pub tolerance: f64,
    pub points: usize,
    pub relations: usize,
    pub triples_checked: u64,
    pub violation_count: u64,
    pub worst_triangle_margin: Option<f64>,
    pub violations: Vec<AxiomViolation>,
    /// Lower semi-continuity of `τ` holds trivially on a finite discrete set.
    pub lower_semicontinuity: String,
}

struct Collector {
    count: u64,
    kept: Vec<AxiomViolation>,
    worst: Option<AxiomViolation>,
}

impl Collector {
    fn push(&mut self, v: AxiomViolation) {
        self.count += 1;
        if v.kind == AxiomKind::ReverseTriangle && self.worst.as_ref().is_none_or(|w| v.margin < w.margin) {
            self.worst = Some(v.clone());
        }
        if self.kept.len() < WITNESS_CAP {
            self.kept.push(v);
        }
    }
}

impl DiscreteSpace {
    /// Checks the finite pre-length space axioms and reports every violation
    /// class with witnesses.
    pub fn validate_axioms(&self, tolerance: f64) -> AxiomReport {
        let n = self.len();
        let mut c = Collector {
            count: 0,
            kept: Vec::new(),
            worst: None,
        };
        for i in 0..n {
            for &j in self.future(i) {
                let j = j as usize;
                if i < j && self.causal(j, i) {
                    c.push(AxiomViolation {
                        kind: AxiomKind::CausalCycle,
                        witness: vec![i, j],
                        margin: 0.0,
                    });
                }
            }
        }
        for (&(i, j), &v) in self.strays() {
            c.push(AxiomViolation {
                kind: AxiomKind::TimelikeNotCausal,
                witness: vec![i as usize, j as usize],
                margin: v,
            });
        }
        for i in 0..n {
            if self.tau(i, i) > 0.0 {
                c.push(AxiomViolation {
                    kind: AxiomKind::TauNotAntisymmetric,
                    witness: vec![i, i],
                    margin: self.tau(i, i),
                });
            }
        }
        for (i, j, v) in self.tau_entries() {
            if i < j && self.tau(j, i) > 0.0 {
                c.push(AxiomViolation {
                    kind: AxiomKind::TauNotAntisymmetric,
                    witness: vec![i, j],
                    margin: v,
                });
            }
        }

        let mut triples = 0u64;
        let mut worst_margin: Option<f64> = None;
        for x in 0..n {
            for &y in self.future(x) {
                let y = y as usize;
                let txy = self.tau(x, y);
                for &z in self.future(y) {
                    let z = z as usize;
                    if z == x {
                        continue;
                    }
                    triples += 1;
                    if !self.causal(x, z) {
                        c.push(AxiomViolation {
                            kind: AxiomKind::NonTransitiveCausal,
                            witness: vec![x, y, z],
                            margin: 0.0,
                        });
                    }
                    let txz = self.tau(x, z);
                    if txz == f64::INFINITY {
                        continue;
                    }
                    let margin = txz - txy - self.tau(y, z);
                    if worst_margin.is_none_or(|w| margin < w) {
                        worst_margin = Some(margin);
                    }
                    if margin < -tolerance || margin.is_nan() {
                        c.push(AxiomViolation {
                            kind: AxiomKind::ReverseTriangle,
                            witness: vec![x, y, z],
                            margin,
                        });
                    }
                }
            }
        }

        let mut violations = c.kept;
        if let Some(w) = c.worst {
            if !violations.contains(&w) {
                violations.push(w);
            }
        }
        AxiomReport {
            pass: c.count == 0,
            tolerance,
            points: n,
            relations: self.relation_count(),
            triples_checked: triples,
            violation_count: c.count,
            worst_triangle_margin: worst_margin,
            violations,
            lower_semicontinuity: "vacuous on a finite set".to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{Provenance, Relation, TauSource};

    fn chain3(a: f64, b: f64, c: f64) -> DiscreteSpace {
        DiscreteSpace::build(
            vec![None; 3],
            None,
            Provenance::Explicit,
            Relation::Pairs(vec![(0, 1), (1, 2)]),
            TauSource::Explicit(vec![(0, 1, a), (1, 2, b), (0, 2, c)]),
        )
        .unwrap()
    }

    #[test]
    fn valid_chain_passes() {
        let r = chain3(1.0, 1.0, 2.5).validate_axioms(DEFAULT_AXIOM_TOLERANCE);
        assert!(r.pass);
        assert_eq!(r.triples_checked, 1);
        assert_eq!(r.worst_triangle_margin, Some(0.5));
    }

    #[test]
    fn reverse_triangle_failure_has_witness() {
        let r = chain3(1.0, 1.0, 1.5).validate_axioms(DEFAULT_AXIOM_TOLERANCE);
        assert!(!r.pass);
        assert_eq!(r.violation_count, 1);
        assert_eq!(r.violations[0].kind, AxiomKind::ReverseTriangle);
        assert_eq!(r.violations[0].witness, vec![0, 1, 2]);
        assert!((r.violations[0].margin + 0.5).abs() < 1e-15);
    }

    #[test]
    fn cycles_and_strays_reported() {
        let sp = DiscreteSpace::build(
            vec![None; 3],
            None,
            Provenance::Explicit,
            Relation::Pairs(vec![(0, 1), (1, 0)]),
            TauSource::Explicit(vec![(0, 1, 1.0), (1, 0, 1.0), (0, 2, 0.3)]),
        )
        .unwrap();
        let r = sp.validate_axioms(DEFAULT_AXIOM_TOLERANCE);
        let kinds: Vec<_> = r.violations.iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&AxiomKind::CausalCycle));
        assert!(kinds.contains(&AxiomKind::TimelikeNotCausal));
        assert!(kinds.contains(&AxiomKind::TauNotAntisymmetric));
    }

    #[test]
    fn empty_space_passes() {
        assert!(DiscreteSpace::empty().validate_axioms(DEFAULT_AXIOM_TOLERANCE).pass);
    }
}
