use serde::{Deserialize, Serialize};

use super::triangle::{SideKind, Site};
use super::{Direction, Formulation};

/// Worst witnesses kept per verdict.
pub const WITNESS_LIMIT: usize = 5;

/// How a margin is judged: violations are margins above `+tol` or below
/// `-tol`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Requirement {
    AtMost,
    AtLeast,
}

impl Requirement {
    pub fn for_check(formulation: Formulation, direction: Direction) -> Self {
        use Direction::*;
        use Formulation::*;
        match (formulation, direction) {
            (Triangle | Angle, Below) | (Monotonicity | Hinge, Above) => Requirement::AtMost,
            (Triangle | Angle, Above) | (Monotonicity | Hinge, Below) => Requirement::AtLeast,
        }
    }

    /// Larger is worse.
    pub fn severity(self, margin: f64) -> f64 {
        match self {
            Requirement::AtMost => margin,
            Requirement::AtLeast => -margin,
        }
    }

    pub fn violated(self, margin: f64, tol: f64) -> bool {
        margin.is_nan() || self.severity(margin) > tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessPoint {
    /// `None` for a vertex of the hinge or grid.
    pub side: Option<SideKind>,
    pub fraction: f64,
    pub site: Site,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub triangle: [Site; 3],
    pub degenerate: bool,
    pub first: WitnessPoint,
    pub second: WitnessPoint,
    /// Measured quantity: `τ(p,q)`, a measured angle, or the later grid angle.
    pub value: f64,
    /// Model quantity it is compared with.
    pub model_value: f64,
    pub margin: f64,
    #[serde(skip)]
    pub(crate) order: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonVerdict {
    pub formulation: Formulation,
    pub direction: Direction,
    pub k: f64,
    pub pass: bool,
    pub requirement: Requirement,
    /// Most violating margin, `None` if nothing was evaluated.
    pub worst_margin: Option<f64>,
    pub tolerance: f64,
    pub samples: u64,
    pub triangles: u64,
    pub violations: u64,
    /// Triangles or hinges that could not be evaluated at this `K`.
    pub skipped: u64,
    /// Timelike implication failures between points and comparison points.
    pub implication_failures: u64,
    pub witnesses: Vec<Witness>,
}

impl ComparisonVerdict {
    pub fn new(formulation: Formulation, direction: Direction, k: f64, tolerance: f64) -> Self {
        Self {
            formulation,
            direction,
            k,
            pass: true,
            requirement: Requirement::for_check(formulation, direction),
            worst_margin: None,
            tolerance,
            samples: 0,
            triangles: 0,
            violations: 0,
            skipped: 0,
            implication_failures: 0,
            witnesses: Vec::new(),
        }
    }

    fn is_worse(&self, a: &Witness, b: &Witness) -> bool {
        let (sa, sb) = (self.requirement.severity(a.margin), self.requirement.severity(b.margin));
        sa > sb || (sa == sb && a.order < b.order)
    }

    /// Records one evaluated sample.
    pub fn record(&mut self, w: Witness) {
        self.samples += 1;
        let sev = self.requirement.severity(w.margin);
        if self.requirement.violated(w.margin, self.tolerance) {
            self.violations += 1;
            self.pass = false;
        }
        if self
            .worst_margin
            .is_none_or(|m| sev > self.requirement.severity(m) || w.margin.is_nan())
        {
            self.worst_margin = Some(w.margin);
        }
        self.keep(w);
    }

    fn keep(&mut self, w: Witness) {
        if self.witnesses.len() == WITNESS_LIMIT && !self.is_worse(&w, self.witnesses.last().unwrap()) {
            return;
        }
        let pos = self
            .witnesses
            .iter()
            .position(|o| self.is_worse(&w, o))
            .unwrap_or(self.witnesses.len());
        self.witnesses.insert(pos, w);
        self.witnesses.truncate(WITNESS_LIMIT);
    }

    /// Folds in a partial verdict computed for later samples.
    pub fn merge(&mut self, other: ComparisonVerdict) {
        self.samples += other.samples;
        self.triangles += other.triangles;
        self.violations += other.violations;
        self.skipped += other.skipped;
        self.implication_failures += other.implication_failures;
        self.pass &= other.pass;
        if let Some(m) = other.worst_margin {
            if self
                .worst_margin
                .is_none_or(|s| self.requirement.severity(m) > self.requirement.severity(s) || m.is_nan())
            {
                self.worst_margin = Some(m);
            }
        }
        for w in other.witnesses {
            self.keep(w);
        }
    }

    /// Places the witnesses of this verdict after those of verdicts with a
    /// smaller ordinal when merged.
    pub(crate) fn stamp(&mut self, ordinal: u64) {
        for w in &mut self.witnesses {
            w.order = (ordinal << 24) | (w.order & 0xff_ffff);
        }
    }

    pub fn empty_like(&self) -> Self {
        Self::new(self.formulation, self.direction, self.k, self.tolerance)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelPoint;

    fn w(margin: f64, order: u64) -> Witness {
        let p = WitnessPoint {
            side: None,
            fraction: 0.0,
            site: Site::Ambient(ModelPoint::ORIGIN),
        };
        Witness {
            triangle: [Site::Sample(0), Site::Sample(1), Site::Sample(2)],
            degenerate: false,
            first: p,
            second: p,
            value: margin,
            model_value: 0.0,
            margin,
            order,
        }
    }

    #[test]
    fn requirements_by_direction() {
        assert_eq!(
            Requirement::for_check(Formulation::Triangle, Direction::Below),
            Requirement::AtMost
        );
        assert_eq!(
            Requirement::for_check(Formulation::Triangle, Direction::Above),
            Requirement::AtLeast
        );
        assert_eq!(
            Requirement::for_check(Formulation::Hinge, Direction::Below),
            Requirement::AtLeast
        );
        assert_eq!(
            Requirement::for_check(Formulation::Monotonicity, Direction::Below),
            Requirement::AtLeast
        );
        assert_eq!(
            Requirement::for_check(Formulation::Angle, Direction::Below),
            Requirement::AtMost
        );
    }

    #[test]
    fn merge_is_order_stable() {
        let mut a = ComparisonVerdict::new(Formulation::Triangle, Direction::Above, 0.0, 1e-6);
        let mut b = a.empty_like();
        for (i, m) in [0.0, -0.5, 0.1, -0.5, -1e-7, -0.2, -0.3, -0.4].iter().enumerate() {
            if i < 4 {
                a.record(w(*m, i as u64));
            } else {
                b.record(w(*m, i as u64));
            }
        }
        a.merge(b);
        assert!(!a.pass);
        assert_eq!(a.violations, 5);
        assert_eq!(a.worst_margin, Some(-0.5));
        let orders: Vec<u64> = a.witnesses.iter().map(|w| w.order).collect();
        assert_eq!(orders, vec![1, 3, 7, 6, 5]);
    }
}
