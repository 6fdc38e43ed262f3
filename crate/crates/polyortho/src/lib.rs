//! Orthonormal polynomial bases over arbitrary polygonal domains via exact
//! Bernstein-Bezier spline integration, and the quadrature rules derived
//! from them.
//!
//! The pipeline: triangulate a polygon, assemble exact block mass matrices
//! and C^r smoothness constraints, and read an orthonormal basis of P_d off
//! an orthonormal null space. On top of the bases sit quadrature
//! constructions (interpolatory, moment-matched, common-zero one-point,
//! even-reduction), 1-D Legendre reduction rules, 2-D reduction cascades,
//! and zero-curve / common-zero analysis.
//!
//! Inner loops (grid verification, assembly, certification, zero scans)
//! run data-parallel under the default `parallel` feature and fall back to
//! plain loops without it.

pub mod assembly;
pub mod bb;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod jsonio;
pub mod legendre1d;
pub mod numkernels;
pub mod orthobasis;
pub(crate) mod par;
pub mod quadrature;
pub mod reduce2d;
pub mod zerosets;

pub use error::{Error, Result};
