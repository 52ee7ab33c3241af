use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::comparison::exponent_bounds;
use crate::error::{Error, Result};
use crate::geometry::DomainGeometry;
use crate::numerics::QuadConfig;
use crate::transform::exp_norm_sq;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightEquivalenceReport {
    pub r_values: Vec<f64>,
    pub t_values: Vec<f64>,
    /// `ρ(r, t)`, one row per `t`.
    pub rho: Vec<Vec<f64>>,
    pub min: f64,
    pub max: f64,
    pub spread: f64,
    pub factor: f64,
    pub pass: bool,
}

/// Tabulates `ρ(r, t) = e^{-2r} (r ‖(r1*(t), r2*(t))‖)^{3/2} ‖e^{⟨z,·⟩}‖²_μ`
/// on `n_r` geometrically spaced radii and checks `max ρ / min ρ < factor`.
///
/// The equivalence is only claimed away from the origin, so `r_min < 1`
/// is refused.
pub fn verify_weight_equivalence(
    geom: &DomainGeometry,
    r_range: (f64, f64),
    n_r: usize,
    t_samples: &[f64],
    factor: f64,
    cfg: &QuadConfig,
) -> Result<WeightEquivalenceReport> {
    let (r_min, r_max) = r_range;
    if !(r_min >= 1.0) {
        return Err(Error::HypothesisNotMet(format!("weights are compared only for r >= 1, got r_min = {r_min}")));
    }
    if !(r_max >= r_min && r_max.is_finite() && n_r >= 2) {
        return Err(Error::invalid("need a finite r range and at least two radii"));
    }
    if t_samples.is_empty() || t_samples.iter().any(|t| !(*t > 0.0 && *t < 1.0)) {
        return Err(Error::invalid("t samples must lie in (0, 1)"));
    }
    exponent_bounds(geom)?;
    let r_values: Vec<f64> = (0..n_r).map(|i| r_min * (r_max / r_min).powf(i as f64 / (n_r - 1) as f64)).collect();
    let rho = t_samples
        .par_iter()
        .map(|&t| {
            let norm = geom.r1_star(t).hypot(geom.r2_star(t));
            r_values
                .iter()
                .map(|&r| Ok((exp_norm_sq(geom, r, t, cfg)?.log_magnitude - 2.0 * r + 1.5 * (r * norm).ln()).exp()))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let min = rho.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let max = rho.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(WeightEquivalenceReport { r_values, t_values: t_samples.to_vec(), rho, min, max, spread: max / min, factor, pass: max / min < factor })
}
