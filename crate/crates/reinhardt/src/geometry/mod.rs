//! Domains described by an exponent profile: radial boundary profiles,
//! duality, curvature and heuristic classification.

pub mod classify;
pub mod domain;
pub mod expr;
pub mod pchip;
pub mod profile;
pub mod radial;

pub use classify::{BoundaryClassification, BoundaryType, Flag, Membership, PLimit, PLimits};
pub use domain::{
    classify_boundary, curvatures_at, domain_from_exponent, domain_from_exponent_numeric, dual_complement, support_constants,
    CurvatureTriple, DomainGeometry, SupportConstants,
};
pub use expr::{Expr, ParseError};
pub use profile::{DomainSpec, ExponentProfile, ProfileKind};
