use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::DomainGeometry;
use crate::leray::moments::{log_moment, MomentKind};
use crate::numerics::{extrapolate_limit_at, log_factorial, QuadConfig};

/// `ln γ(m1, m2) = ln((m1 + m2 + 1)! / (m1! m2!))`.
pub fn log_gamma_coefficient(m1: u32, m2: u32) -> f64 {
    log_factorial(m1 as u64 + m2 as u64 + 1) - log_factorial(m1 as u64) - log_factorial(m2 as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LerayEntry {
    pub log_norm_sq: f64,
    /// Absolute error estimate of `log_norm_sq`.
    pub err_est: f64,
    pub converged: bool,
}

/// `ln ‖L_{m1,m2}‖² = 2 ln γ + ln I_Ω + ln I_Ω*`.
pub fn log_leray_norm_sq(geom: &DomainGeometry, m1: u32, m2: u32, cfg: &QuadConfig) -> Result<LerayEntry> {
    let (a, b) = (m1 as f64, m2 as f64);
    let i = log_moment(geom, a, b, MomentKind::Primal, cfg)?;
    let j = log_moment(geom, a, b, MomentKind::Dual, cfg)?;
    Ok(LerayEntry {
        log_norm_sq: 2.0 * log_gamma_coefficient(m1, m2) + i.log_value + j.log_value,
        err_est: i.rel_err + j.rel_err,
        converged: i.converged && j.converged,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LerayNormGrid {
    pub m1_max: u32,
    pub m2_max: u32,
    /// Row-major in `m1`.
    pub log_norm_sq: Vec<f64>,
    pub log_gamma: Vec<f64>,
    pub err_est: Vec<f64>,
    pub converged: Vec<bool>,
}

impl LerayNormGrid {
    fn index(&self, m1: u32, m2: u32) -> Result<usize> {
        if m1 > self.m1_max || m2 > self.m2_max {
            return Err(Error::IndexOutOfTable { m1, m2 });
        }
        Ok(m1 as usize * (self.m2_max as usize + 1) + m2 as usize)
    }

    pub fn log_norm_sq(&self, m1: u32, m2: u32) -> Result<f64> {
        Ok(self.log_norm_sq[self.index(m1, m2)?])
    }

    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|c| *c)
    }

    pub fn norm_sq(&self, m1: u32, m2: u32) -> Result<f64> {
        Ok(self.log_norm_sq(m1, m2)?.exp())
    }

    /// `(m1, m2, ln ‖L‖², err)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (u32, u32, f64, f64)> + '_ {
        let w = self.m2_max as usize + 1;
        self.log_norm_sq
            .iter()
            .zip(&self.err_est)
            .enumerate()
            .map(move |(k, (v, e))| ((k / w) as u32, (k % w) as u32, *v, *e))
    }

    /// Largest `‖L‖²` over the sub-grid with both degrees at most `n`.
    pub fn sup_up_to(&self, n: u32) -> f64 {
        self.entries().filter(|(a, b, _, _)| *a <= n && *b <= n).map(|(_, _, v, _)| v).fold(f64::NEG_INFINITY, f64::max).exp()
    }
}

/// Grid of Leray norms; rows are independent and computed in parallel.
pub fn leray_norm_grid(geom: &DomainGeometry, m1_max: u32, m2_max: u32, cfg: &QuadConfig) -> Result<LerayNormGrid> {
    cfg.validate()?;
    let rows: Vec<Vec<LerayEntry>> = (0..=m1_max)
        .into_par_iter()
        .map(|m1| (0..=m2_max).map(|m2| log_leray_norm_sq(geom, m1, m2, cfg)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let flat: Vec<LerayEntry> = rows.into_iter().flatten().collect();
    let log_gamma = (0..=m1_max).flat_map(|a| (0..=m2_max).map(move |b| log_gamma_coefficient(a, b))).collect();
    Ok(LerayNormGrid {
        m1_max,
        m2_max,
        log_norm_sq: flat.iter().map(|e| e.log_norm_sq).collect(),
        log_gamma,
        err_est: flat.iter().map(|e| e.err_est).collect(),
        converged: flat.iter().map(|e| e.converged).collect(),
    })
}

/// Limit of `‖L_{m1,m2}‖²` along `m1/m2 → x`: `½√(p̌ p̌*)` at `s = x/(1+x)`.
pub fn ray_limit_predictor(geom: &DomainGeometry, x: f64) -> Result<f64> {
    if x == 0.0 || x == f64::INFINITY {
        return Err(Error::AxisCase(x));
    }
    if !(x > 0.0) {
        return Err(Error::domain(format!("ray ratio must be positive, got {x}")));
    }
    let s = x / (1.0 + x);
    let p = geom.profile().try_p_check(s)?;
    Ok(0.5 * (p * p / (p - 1.0)).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    BoundedConsistent,
    UnboundedConsistent,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayReport {
    pub ratio: f64,
    pub degrees: Vec<u32>,
    pub values: Vec<f64>,
    pub extrapolated: f64,
    pub converged: bool,
    pub predicted: Option<f64>,
    pub rel_diff: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundednessReport {
    pub max_degree: u32,
    /// Grid sup of `‖L‖²` with both degrees at most n, for n = M/4, M/2, M.
    pub sup_by_degree: Vec<(u32, f64)>,
    pub grid_sup: f64,
    pub rays: Vec<RayReport>,
    pub verdict: Verdict,
    pub evidence: String,
}

/// Ray sequence `‖L_{round(x n), n}‖²` at `n ∈ {M/8, M/4, M/2, M}`.
pub fn ray_sequence(geom: &DomainGeometry, x: f64, max_degree: u32, cfg: &QuadConfig) -> Result<RayReport> {
    let degrees: Vec<u32> = [8, 4, 2, 1].iter().map(|d| (max_degree / d).max(1)).collect();
    let values = degrees
        .par_iter()
        .map(|&n| Ok(log_leray_norm_sq(geom, (x * n as f64).round() as u32, n, cfg)?.log_norm_sq.exp()))
        .collect::<Result<Vec<f64>>>()?;
    let ns: Vec<f64> = degrees.iter().map(|n| *n as f64).collect();
    let ex = extrapolate_limit_at(&ns, &values)?;
    let predicted = ray_limit_predictor(geom, x).ok();
    Ok(RayReport {
        ratio: x,
        rel_diff: predicted.map(|p| (ex.limit - p).abs() / p),
        degrees,
        values,
        extrapolated: ex.limit,
        converged: ex.converged,
        predicted,
    })
}

pub fn boundedness_report(geom: &DomainGeometry, max_degree: u32, rays: &[f64], cfg: &QuadConfig) -> Result<BoundednessReport> {
    if max_degree < 16 {
        return Err(Error::invalid(format!("maximum degree must be at least 16, got {max_degree}")));
    }
    let grid = leray_norm_grid(geom, max_degree, max_degree, cfg)?;
    let sup_by_degree: Vec<(u32, f64)> = [max_degree / 4, max_degree / 2, max_degree].iter().map(|&n| (n, grid.sup_up_to(n))).collect();
    let ray_reports = rays.iter().map(|&x| ray_sequence(geom, x, max_degree, cfg)).collect::<Result<Vec<_>>>()?;

    let (s4, s2, s1) = (sup_by_degree[0].1, sup_by_degree[1].1, sup_by_degree[2].1);
    let (g0, g1) = (s2 / s4, s1 / s2);
    let verdict = if g1 < 1.05 && (g1 <= g0 || g1 < 1.01) {
        Verdict::BoundedConsistent
    } else if g1 >= 1.2 && g0 >= 1.2 {
        Verdict::UnboundedConsistent
    } else {
        Verdict::Inconclusive
    };
    let evidence = format!(
        "grid sup {s4:.6} (M/4), {s2:.6} (M/2), {s1:.6} (M); growth factors {g0:.4} then {g1:.4}; {} of {} rays converged",
        ray_reports.iter().filter(|r| r.converged).count(),
        ray_reports.len()
    );
    Ok(BoundednessReport { max_degree, sup_by_degree, grid_sup: s1, rays: ray_reports, verdict, evidence })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisProbe {
    pub m0: u32,
    pub degrees: Vec<u32>,
    pub sequence: Vec<f64>,
    pub extrapolated_limit: f64,
    pub converged: bool,
    pub confidence: f64,
}

impl AxisProbe {
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::Inconclusive)
        }
    }
}

/// `‖L_{m0,n}‖²` for `n = ⌈N/32⌉, ⌈N/16⌉, …, N` and its extrapolated limit.
pub fn axis_limit_probe(geom: &DomainGeometry, m0: u32, n_max: u32, cfg: &QuadConfig) -> Result<AxisProbe> {
    if !geom.membership.in_r_prime.value {
        return Err(Error::HypothesisNotMet("the exponent profile does not appear to extend continuously to [0, 1]".into()));
    }
    if n_max < 32 {
        return Err(Error::invalid(format!("N_max must be at least 32, got {n_max}")));
    }
    let degrees: Vec<u32> = (0..=5).rev().map(|j| n_max.div_ceil(1 << j)).collect();
    let sequence = degrees.par_iter().map(|&n| Ok(log_leray_norm_sq(geom, m0, n, cfg)?.log_norm_sq.exp())).collect::<Result<Vec<f64>>>()?;
    let ns: Vec<f64> = degrees.iter().map(|n| *n as f64).collect();
    let ex = extrapolate_limit_at(&ns, &sequence)?;
    Ok(AxisProbe { m0, degrees, sequence, extrapolated_limit: ex.limit, converged: ex.converged, confidence: ex.confidence })
}
