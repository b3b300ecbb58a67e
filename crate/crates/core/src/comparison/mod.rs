//! Timelike triangles, their comparison configurations in the model spaces
//! and the four curvature-bound formulations.
//!
//! Direction conventions: a space with curvature bounded below by `K`
//! satisfies `τ(p,q) ≤ τ̄(p̄,q̄)` on every triangle, one bounded above
//! satisfies `τ(p,q) ≥ τ̄(p̄,q̄)`.

mod angle;
mod compare;
mod gluing;
mod realize;
mod triangle;
mod verdict;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::ModelError;
use crate::space::SpaceError;

pub use angle::{AngleMeasurement, Hinge, Leg, SHRINK_FACTOR, SHRINK_LEVELS};
pub use compare::PairSample;
pub use gluing::{GluingCase, Subdivision};
pub use realize::{realize_triangle, ComparisonConfiguration};
pub use triangle::{
    Comparator, GeodesicPath, Side, SideKind, SideMode, SidePoint, Site, TimelikeTriangle, TriangleFilter,
    DEFAULT_SIDE_GRID, DEGENERACY_TOLERANCE,
};
pub use verdict::{ComparisonVerdict, Requirement, Witness, WitnessPoint, WITNESS_LIMIT};

/// Which curvature bound is tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Above,
    Below,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Above => "above",
            Direction::Below => "below",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formulation {
    Triangle,
    Monotonicity,
    Angle,
    Hinge,
}

impl Formulation {
    pub const ALL: [Formulation; 4] = [
        Formulation::Triangle,
        Formulation::Monotonicity,
        Formulation::Angle,
        Formulation::Hinge,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Formulation::Triangle => "triangle",
            Formulation::Monotonicity => "monotonicity",
            Formulation::Angle => "angle",
            Formulation::Hinge => "hinge",
        }
    }
}

/// Absolute tolerances applied to margins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Time-separation margins (triangle and hinge).
    pub tau: f64,
    /// Angle margins (monotonicity grids, angle comparison, angle limits).
    pub angle: f64,
    /// Axiom checks on the space itself.
    pub axiom: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tau: 1e-6,
            angle: 1e-4,
            axiom: crate::space::DEFAULT_AXIOM_TOLERANCE,
        }
    }
}

impl Tolerances {
    pub fn for_formulation(&self, f: Formulation) -> f64 {
        match f {
            Formulation::Triangle | Formulation::Hinge => self.tau,
            Formulation::Monotonicity | Formulation::Angle => self.angle,
        }
    }
}

#[derive(Debug, Error)]
pub enum ComparisonError {
    #[error("side point is not on the triangle: {0}")]
    PairOffTriangle(String),
    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),
    #[error("angle undefined: {0}")]
    AngleUndefined(String),
    #[error("angle extrapolation did not converge (last delta {delta:e} > {tolerance:e})")]
    NonConvergent { delta: f64, tolerance: f64 },
    #[error("points are not timelike related: {0}")]
    NotTimelikeRelated(String),
    #[error("triangle cannot be realized: {0}")]
    Unrealizable(ModelError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Model(#[from] ModelError),
}
