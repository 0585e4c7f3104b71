//! Self-similar regular shock reflection for potential flow.
//!
//! The crate covers the algebra of uniform states and shock jumps, the
//! geometry of the elliptic region behind the reflected shock, a free-boundary
//! solver for that region and a verifier that certifies computed solutions.

// Input guards are written as `!(x > 0.0)` on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod admissibility;
pub mod archive;
pub mod cli;
pub mod error;
pub mod gas;
pub mod geometry;
pub mod shock;
pub mod solver;

pub use error::{Error, Result};

/// Points and vectors in the self-similar plane.
pub type Vec2 = nalgebra::Vector2<f64>;
