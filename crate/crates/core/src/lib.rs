//! Scalar curvature of warped-product and polar-type metrics on manifold ends,
//! the prescribed-curvature ODE, comparison certificates and ray lengths,
//! with a finite-difference tensor oracle for cross-checks.

// NaN-rejecting guards are written as `!(x > 0.0)`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod completeness;
pub mod dims;
pub mod error;
pub mod expr;
pub mod field;
pub mod grid;
pub mod io;
pub mod ode;
pub mod oracle;
pub mod polar;
pub mod quadrature;
pub mod sampling;
pub mod warp;

pub use error::{CurvError, Result};
