//! Numerical toolkit for Paley–Wiener questions on convex Reinhardt domains in C².
//!
//! A domain is described by an exponent profile `p̌(s)` on `(0, 1)` and two
//! axis intercepts. From it the crate builds radial boundary profiles, exact
//! Leray rank-one norms, Laplace coefficient maps, weighted Bergman norms,
//! and a set of numerical diagnostics.

pub mod diagnostics;
pub mod error;
pub mod geometry;
pub mod leray;
pub mod numerics;
pub mod transform;

pub use error::{Error, Result};
