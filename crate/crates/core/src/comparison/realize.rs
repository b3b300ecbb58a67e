use serde::{Deserialize, Serialize};

use super::triangle::{SideKind, SidePoint, TimelikeTriangle};
use super::ComparisonError;
use crate::model::{ModelError, ModelPoint, ModelSpace, TriangleSides, VertexRole};

/// A comparison triangle in the model space of curvature `k`: `x̄` at the
/// chart origin, `z̄` on the positive time axis and `ȳ` with non-negative
/// space coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonConfiguration {
    pub k: f64,
    pub vertices: [ModelPoint; 3],
    pub sides: TriangleSides,
    /// Hyperbolic angle at `x̄`.
    pub angle_at_x: f64,
}

pub fn realize_triangle(k: f64, t: &TimelikeTriangle) -> Result<ComparisonConfiguration, ComparisonError> {
    ComparisonConfiguration::from_sides(k, t.lengths)
}

impl ComparisonConfiguration {
    pub fn from_sides(k: f64, sides: TriangleSides) -> Result<Self, ComparisonError> {
        let model = ModelSpace::new(k);
        let omega = model
            .comparison_angle(sides, VertexRole::Past)
            .map_err(ComparisonError::Unrealizable)?;
        let z = model.point_on_axis(sides.c).map_err(ComparisonError::Unrealizable)?;
        let y = model
            .point_from_origin(sides.a, omega)
            .map_err(ComparisonError::Unrealizable)?;
        Ok(Self {
            k,
            vertices: [ModelPoint::ORIGIN, y, z],
            sides,
            angle_at_x: omega,
        })
    }

    pub fn model(&self) -> ModelSpace {
        ModelSpace::new(self.k)
    }

    fn endpoints(&self, side: SideKind) -> (ModelPoint, ModelPoint) {
        let [x, y, z] = self.vertices;
        match side {
            SideKind::Xy => (x, y),
            SideKind::Yz => (y, z),
            SideKind::Xz => (x, z),
        }
    }

    /// Point at `τ`-arclength fraction `f` along a side of the comparison
    /// triangle. The endpoints are returned exactly.
    pub fn point(&self, side: SideKind, f: f64) -> Result<ModelPoint, ModelError> {
        let (p, q) = self.endpoints(side);
        if f <= 0.0 {
            Ok(p)
        } else if f >= 1.0 {
            Ok(q)
        } else {
            self.model().geodesic(p, q, f)
        }
    }

    pub fn comparison_point(&self, p: &SidePoint) -> Result<ModelPoint, ModelError> {
        self.point(p.side, p.fraction)
    }

    /// `τ̄` between two model points; pairs beyond the model diameter give
    /// `+∞`.
    pub fn tau(&self, p: ModelPoint, q: ModelPoint) -> f64 {
        match self.model().tau(p, q) {
            Ok(t) => t,
            Err(ModelError::ExceedsModelDiameter { .. }) => f64::INFINITY,
            Err(_) => f64::NAN,
        }
    }

    /// Side lengths re-measured in the model.
    pub fn measured_sides(&self) -> TriangleSides {
        let [x, y, z] = self.vertices;
        TriangleSides::new(self.tau(x, y), self.tau(y, z), self.tau(x, z))
    }
}
