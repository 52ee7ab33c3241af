use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::DomainGeometry;
use crate::numerics::{integrate_log_peaked, log_add, log_beta, sigmoid, softplus, LogQuadrature, QuadConfig};

/// Which radial moment to integrate over `s ∈ (0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentKind {
    /// `∫ r1^{2m1} r2^{2m2} ds`.
    Primal,
    /// `∫ r1*^{2m1} r2*^{2m2} ds`.
    Dual,
    /// `∫ r1*^{2m1} r2*^{2m2} (r1*² + r2*²)^{3/4} ds`.
    DualWeighted,
}

const X_RANGE: f64 = 700.0;

/// Natural log of a radial moment.
///
/// The integrand is written in the logit variable, where it is a smooth
/// bump whose maximum solves `(1-σ)(2 m1 q + 1) = σ(2 m2 q + 1)` with
/// `q = d ln r1 / d ln s` along the boundary.
pub fn log_moment(geom: &DomainGeometry, m1: f64, m2: f64, kind: MomentKind, cfg: &QuadConfig) -> Result<LogQuadrature> {
    if !(m1 >= 0.0 && m2 >= 0.0) {
        return Err(Error::domain(format!("moment degrees must be non-negative, got ({m1}, {m2})")));
    }
    if let (Some(p), MomentKind::Primal | MomentKind::Dual) = (geom.constant_exponent(), kind) {
        let (lb1, lb2) = (geom.b1().ln(), geom.b2().ln());
        let (p, sign) = if kind == MomentKind::Primal { (p, 1.0) } else { (p / (p - 1.0), -1.0) };
        let log_value = sign * (2.0 * m1 * lb1 + 2.0 * m2 * lb2) + log_beta(2.0 * m1 / p + 1.0, 2.0 * m2 / p + 1.0)?;
        return Ok(LogQuadrature { log_value, rel_err: 1e-14, converged: true });
    }

    let peak = moment_peak(geom, m1, m2, kind);

    let h = |x: f64| {
        let (l1, l2) = match kind {
            MomentKind::Primal => geom.log_radii_x(x),
            _ => geom.log_dual_radii_x(x),
        };
        let mut v = 2.0 * m1 * l1 + 2.0 * m2 * l2 - softplus(-x) - softplus(x);
        if kind == MomentKind::DualWeighted {
            v += 0.75 * log_add(2.0 * l1, 2.0 * l2);
        }
        v
    };
    integrate_log_peaked(h, peak, -X_RANGE, X_RANGE, cfg)
}

/// Logit of the maximiser of `r1^{2m1} r2^{2m2}` (or its dual analogue)
/// against `ds`, ignoring the extra weight of [`MomentKind::DualWeighted`].
pub fn moment_peak(geom: &DomainGeometry, m1: f64, m2: f64, kind: MomentKind) -> f64 {
    let q = |x: f64| match kind {
        MomentKind::Primal => geom.inv_p_x(x),
        _ => 1.0 - geom.inv_p_x(x),
    };
    match geom.constant_exponent() {
        Some(_) => {
            let q0 = q(0.0);
            ((2.0 * m1 * q0 + 1.0) / (2.0 * m2 * q0 + 1.0)).ln()
        }
        None => {
            let slope = |x: f64| {
                let (s, qx) = (sigmoid(x), q(x));
                (1.0 - s) * (2.0 * m1 * qx + 1.0) - s * (2.0 * m2 * qx + 1.0)
            };
            let (mut lo, mut hi) = (-X_RANGE, X_RANGE);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if slope(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-10 {
                    break;
                }
            }
            0.5 * (lo + hi)
        }
    }
}

/// `ln I(m1, m2)` over `0..=m1_max × 0..=m2_max`, row-major in `m1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentTable {
    pub geom_id: String,
    pub kind: MomentKind,
    pub m1_max: u32,
    pub m2_max: u32,
    pub log_i: Vec<f64>,
    /// Relative error estimates of the moments (absolute in log space).
    pub err: Vec<f64>,
    pub converged: Vec<bool>,
}

impl MomentTable {
    fn index(&self, m1: u32, m2: u32) -> Result<usize> {
        if m1 > self.m1_max || m2 > self.m2_max {
            return Err(Error::IndexOutOfTable { m1, m2 });
        }
        Ok(m1 as usize * (self.m2_max as usize + 1) + m2 as usize)
    }

    pub fn log_i(&self, m1: u32, m2: u32) -> Result<f64> {
        Ok(self.log_i[self.index(m1, m2)?])
    }

    pub fn err(&self, m1: u32, m2: u32) -> Result<f64> {
        Ok(self.err[self.index(m1, m2)?])
    }

    pub fn is_converged(&self, m1: u32, m2: u32) -> Result<bool> {
        Ok(self.converged[self.index(m1, m2)?])
    }

    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|c| *c)
    }
}

/// Primal moment table `I_Ω`.
pub fn moment_table(geom: &DomainGeometry, m1_max: u32, m2_max: u32, cfg: &QuadConfig) -> Result<MomentTable> {
    moment_table_of(geom, MomentKind::Primal, m1_max, m2_max, cfg)
}

/// Moment table of any kind; rows are computed in parallel.
pub fn moment_table_of(geom: &DomainGeometry, kind: MomentKind, m1_max: u32, m2_max: u32, cfg: &QuadConfig) -> Result<MomentTable> {
    cfg.validate()?;
    let rows: Vec<Vec<LogQuadrature>> = (0..=m1_max)
        .into_par_iter()
        .map(|m1| (0..=m2_max).map(|m2| log_moment(geom, m1 as f64, m2 as f64, kind, cfg)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let flat: Vec<LogQuadrature> = rows.into_iter().flatten().collect();
    Ok(MomentTable {
        geom_id: geom.profile().label(),
        kind,
        m1_max,
        m2_max,
        log_i: flat.iter().map(|q| q.log_value).collect(),
        err: flat.iter().map(|q| q.rel_err).collect(),
        converged: flat.iter().map(|q| q.converged).collect(),
    })
}
