//! Finite Lorentzian pre-length spaces and numerical timelike curvature
//! comparison against the constant-curvature model surfaces.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: exact geometry of the model spaces `𝕃_K`.
//! - [`space`]: finite spaces with a causal order and a time separation.
//! - [`generators`]: Poisson sprinkling, the Lorentzian cylinder, fixtures.
//! - [`comparison`]: triangles, comparison configurations and the four
//!   curvature-bound formulations.
//! - [`verifier`]: whole-space campaigns and their reports.

// Negated comparisons are used on purpose: they treat NaN as failing.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod comparison;
pub mod generators;
pub mod model;
pub mod space;
pub mod verifier;

pub use model::{
    finite_diameter_constant, AdsDomain, Causality, Chart, HingeData, HingeOrientation, ModelError, ModelPoint,
    ModelSpace, TriangleSides, VertexRole,
};
pub use space::{Ambient, DiscreteSpace, Provenance, SpaceError};
