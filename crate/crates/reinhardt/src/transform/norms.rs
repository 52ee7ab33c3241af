use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::DomainGeometry;
use crate::leray::{log_moment, MomentKind, MomentTable};
use crate::numerics::{log_factorial, log_gamma, log_sum_exp, QuadConfig};
use crate::transform::coeffs::{CoefficientGrid, Side};

/// Which normalisation a reported norm uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// Exact constants of the `(s, θ1, θ2)` parametrisation.
    ExactParametrized,
    /// Model series that agree with the exact norm up to fixed factors.
    PaperEquivalent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Contribution {
    pub m1: u32,
    pub m2: u32,
    pub log_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub log_value: f64,
    /// `exp(log_value)`; infinite if that overflows.
    pub value: f64,
    pub breakdown: Vec<Contribution>,
    /// Relative error estimate of `value`.
    pub err_est: f64,
    pub convention: Convention,
    pub converged: bool,
}

/// One monomial's term in log space with its relative error.
pub(crate) struct Term {
    pub m1: u32,
    pub m2: u32,
    pub log_value: f64,
    pub rel_err: f64,
    pub converged: bool,
}

impl NormReport {
    pub(crate) fn from_terms(terms: Vec<Term>, convention: Convention) -> Self {
        let logs: Vec<f64> = terms.iter().map(|t| t.log_value).collect();
        let log_value = if logs.is_empty() { f64::NEG_INFINITY } else { log_sum_exp(&logs) };
        let err_est = if log_value == f64::NEG_INFINITY {
            0.0
        } else {
            terms.iter().map(|t| t.rel_err * (t.log_value - log_value).exp()).sum()
        };
        NormReport {
            log_value,
            value: log_value.exp(),
            breakdown: terms.iter().map(|t| Contribution { m1: t.m1, m2: t.m2, log_value: t.log_value }).collect(),
            err_est,
            converged: terms.iter().all(|t| t.converged),
            convention,
        }
    }
}

fn log_abs_sq(c: Complex64) -> f64 {
    c.norm_sqr().ln()
}

fn check_table(geom: &DomainGeometry, table: &MomentTable) -> Result<()> {
    if table.kind != MomentKind::Primal {
        return Err(Error::invalid("a primal moment table is required"));
    }
    if table.geom_id != geom.profile().label() {
        return Err(Error::invalid(format!("moment table belongs to {}, not {}", table.geom_id, geom.profile().label())));
    }
    Ok(())
}

/// `‖f‖²_μ = ¼ Σ |a|² I_Ω(m1, m2)`.
pub fn hardy_norm_sq(geom: &DomainGeometry, a: &CoefficientGrid, table: &MomentTable) -> Result<NormReport> {
    a.expect_side(Side::Hardy)?;
    check_table(geom, table)?;
    let mut terms = Vec::with_capacity(a.len());
    for (m1, m2, c) in a.iter() {
        let li = table.log_i(m1, m2)?;
        terms.push(Term {
            m1,
            m2,
            log_value: 0.25f64.ln() + log_abs_sq(c) + li,
            rel_err: table.err(m1, m2)?,
            converged: table.is_converged(m1, m2)?,
        });
    }
    Ok(NormReport::from_terms(terms, Convention::ExactParametrized))
}

/// `Σ |a|² I_Ω(m1, m2)` without the measure's constant.
pub fn hardy_model_series(geom: &DomainGeometry, a: &CoefficientGrid, table: &MomentTable) -> Result<NormReport> {
    let mut r = hardy_norm_sq(geom, a, table)?;
    let shift = 4f64.ln();
    r.log_value += shift;
    r.value = r.log_value.exp();
    r.breakdown.iter_mut().for_each(|c| c.log_value += shift);
    r.convention = Convention::PaperEquivalent;
    Ok(r)
}

// ln(I / (m1! m2!)).
fn log_laplace_factor(table: &MomentTable, m1: u32, m2: u32) -> Result<f64> {
    Ok(table.log_i(m1, m2)? - log_factorial(m1 as u64) - log_factorial(m2 as u64))
}

/// `t = ¼ conj(a) I_Ω(m1, m2) / (m1! m2!)`.
pub fn laplace_map(geom: &DomainGeometry, a: &CoefficientGrid, table: &MomentTable) -> Result<CoefficientGrid> {
    a.expect_side(Side::Hardy)?;
    check_table(geom, table)?;
    let mut t = CoefficientGrid::new(Side::Laplace);
    for (m1, m2, c) in a.iter() {
        t.insert(m1, m2, 0.25 * c.conj() * log_laplace_factor(table, m1, m2)?.exp());
    }
    Ok(t)
}

/// Inverse of [`laplace_map`]: `a = 4 conj(t) m1! m2! / I_Ω(m1, m2)`.
pub fn invert_laplace(geom: &DomainGeometry, t: &CoefficientGrid, table: &MomentTable) -> Result<CoefficientGrid> {
    t.expect_side(Side::Laplace)?;
    check_table(geom, table)?;
    let mut a = CoefficientGrid::new(Side::Hardy);
    for (m1, m2, c) in t.iter() {
        a.insert(m1, m2, 4.0 * c.conj() * (-log_laplace_factor(table, m1, m2)?).exp());
    }
    Ok(a)
}

/// Radial factor of the ν weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NuWeight {
    /// `e^{-2H} ‖z‖^{3/2}`.
    #[default]
    Euclidean,
    /// `e^{-2H} H^{3/2}`.
    Support,
}

/// `ln(Γ(2k + 7/2) / 2^{2k + 7/2})`, the radial integral `∫ r^{2k+5/2} e^{-2r} dr`.
pub fn log_radial_gamma(k: u64) -> f64 {
    let a = 2.0 * k as f64 + 3.5;
    log_gamma(a).expect("positive argument") - a * 2f64.ln()
}

/// Squared ν-norm of one monomial `z^m` in log space.
pub fn log_nu_monomial(geom: &DomainGeometry, m1: u32, m2: u32, weight: NuWeight, cfg: &QuadConfig) -> Result<(f64, f64, bool)> {
    let kind = match weight {
        NuWeight::Euclidean => MomentKind::DualWeighted,
        NuWeight::Support => MomentKind::Dual,
    };
    let j = log_moment(geom, m1 as f64, m2 as f64, kind, cfg)?;
    Ok((0.25f64.ln() + log_radial_gamma(m1 as u64 + m2 as u64) + j.log_value, j.rel_err, j.converged))
}

/// `‖F‖²_ν = ¼ Σ |β|² Γ(2k + 7/2)/2^{2k+7/2} J_Ω(m1, m2)` with `k = m1 + m2`.
///
/// `J_Ω` is the dual moment carrying `(r1*² + r2*²)^{3/4}` for the Euclidean
/// weight and the plain dual moment for the support-function weight.
pub fn bergman_nu_norm_sq(geom: &DomainGeometry, beta: &CoefficientGrid, weight: NuWeight, cfg: &QuadConfig) -> Result<NormReport> {
    beta.expect_side(Side::Bergman)?;
    cfg.validate()?;
    let entries: Vec<_> = beta.iter().collect();
    let terms = entries
        .par_iter()
        .map(|&(m1, m2, c)| {
            let (l, rel_err, converged) = log_nu_monomial(geom, m1, m2, weight, cfg)?;
            Ok(Term { m1, m2, log_value: log_abs_sq(c) + l, rel_err, converged })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NormReport::from_terms(terms, Convention::ExactParametrized))
}

/// `Σ |β|² ((m1 + m2 + 1)!)² I_Ω*(m1, m2)`.
pub fn bergman_model_series(geom: &DomainGeometry, beta: &CoefficientGrid, cfg: &QuadConfig) -> Result<NormReport> {
    beta.expect_side(Side::Bergman)?;
    cfg.validate()?;
    let terms = beta
        .iter()
        .map(|(m1, m2, c)| {
            let j = log_moment(geom, m1 as f64, m2 as f64, MomentKind::Dual, cfg)?;
            let lf = log_factorial(m1 as u64 + m2 as u64 + 1);
            Ok(Term { m1, m2, log_value: log_abs_sq(c) + 2.0 * lf + j.log_value, rel_err: j.rel_err, converged: j.converged })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NormReport::from_terms(terms, Convention::PaperEquivalent))
}
