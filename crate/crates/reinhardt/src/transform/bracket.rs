use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{support_constants, DomainGeometry, SupportConstants};
use crate::leray::MomentTable;
use crate::numerics::QuadConfig;
use crate::transform::coeffs::CoefficientGrid;
use crate::transform::norms::{bergman_nu_norm_sq, hardy_norm_sq, laplace_map, NuWeight};

/// Spread of `‖ℒf‖²_ν / ‖f‖²_μ` over a family of Hardy grids, set against
/// the operator-norm bounds
/// `√π/e² c^{3/2} ≤ ratio ≤ 5³√e/(2^{15/2}π) C^{3/2} ‖𝕃_b‖²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketReport {
    pub ratios: Vec<f64>,
    pub empirical_min: f64,
    pub empirical_max: f64,
    pub width_ratio: f64,
    pub support: SupportConstants,
    /// Estimate of `‖𝕃_b‖²` used in the upper bound.
    pub leray_sup: f64,
    pub theory_lower: f64,
    pub theory_upper: f64,
    pub lower_contained: bool,
    pub upper_contained: bool,
    pub converged: bool,
}

impl BracketReport {
    pub fn contained(&self) -> bool {
        self.lower_contained && self.upper_contained
    }
}

pub fn theory_bounds(support: &SupportConstants, leray_sup: f64) -> (f64, f64) {
    let lower = PI.sqrt() / (E * E) * support.c_omega.powf(1.5);
    let upper = 125.0 * E.sqrt() / (2f64.powf(7.5) * PI) * support.cap_c_omega.powf(1.5) * leray_sup;
    (lower, upper)
}

pub fn isomorphism_bracket(
    geom: &DomainGeometry,
    grids: &[CoefficientGrid],
    table: &MomentTable,
    leray_sup: f64,
    cfg: &QuadConfig,
) -> Result<BracketReport> {
    if grids.is_empty() {
        return Err(Error::invalid("no coefficient grids given"));
    }
    let mut ratios = Vec::with_capacity(grids.len());
    let mut converged = true;
    for a in grids {
        let mu = hardy_norm_sq(geom, a, table)?;
        if mu.log_value == f64::NEG_INFINITY {
            return Err(Error::invalid("zero Hardy grid has no norm ratio"));
        }
        let mut beta = laplace_map(geom, a, table)?;
        beta.side = crate::transform::Side::Bergman;
        let nu = bergman_nu_norm_sq(geom, &beta, NuWeight::Euclidean, cfg)?;
        converged &= mu.converged && nu.converged;
        ratios.push((nu.log_value - mu.log_value).exp());
    }
    let empirical_min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let empirical_max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let support = support_constants(geom);
    let (theory_lower, theory_upper) = theory_bounds(&support, leray_sup);
    Ok(BracketReport {
        width_ratio: empirical_max / empirical_min,
        lower_contained: empirical_min >= theory_lower,
        upper_contained: empirical_max <= theory_upper,
        ratios,
        empirical_min,
        empirical_max,
        support,
        leray_sup,
        theory_lower,
        theory_upper,
        converged,
    })
}
