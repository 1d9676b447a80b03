//! Translating solitons of Gauss-curvature-power flows.
//!
//! A surface translates rigidly under the flow by `K^alpha` exactly when
//! `K^alpha = <N, v>` for a unit direction `v`. This crate constructs every
//! family of such surfaces that a one-parameter rigid-motion group produces
//! (rotational, helicoidal, translation-type, homothetical), and verifies
//! each construction against an independent differential-geometry kernel
//! that evaluates the defining equation on chart grids. Nonexistence results
//! (speeds transverse to the symmetry axis, exponents other than 1/4 for
//! translation type, ruled surfaces) materialize as computable obstructions.
//!
//! Residual grids and profile quadrature are data-parallel; the `parallel`
//! feature (on by default) maps them over rayon, with a sequential fallback
//! that produces bit-identical results.

// Negated comparisons are deliberate throughout: `!(a < b)` rejects NaN,
// `a >= b` would let it through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod helicoidal;
pub mod kernel;
mod par;
mod power;
pub mod profile;
pub mod quad;
pub mod rotational;
pub mod ruled;
pub mod translation;
pub mod vec3;

pub use vec3::{Mat3, Vec3};
