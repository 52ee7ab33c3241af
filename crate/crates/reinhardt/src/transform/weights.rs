use std::cell::Cell;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::DomainGeometry;
use crate::leray::{moment_peak, MomentKind};
use crate::numerics::{integrate_log_peaked, log_bessel_i0, logit, softplus, LogQuadrature, LogValue, QuadConfig};
use crate::transform::coeffs::{CoefficientGrid, Side};
use crate::transform::norms::{Convention, NormReport, Term};

const X_RANGE: f64 = 700.0;

// Inner integrals must be tighter than the ones they feed.
fn tightened(cfg: &QuadConfig, factor: f64, floor: f64) -> QuadConfig {
    cfg.with_rel_tol((cfg.rel_tol * factor).max(floor))
}

/// `ln ∫ I0(2r r1(s) r1*) I0(2r r2(s) r2*) ds` for `z = r (r1*, r2*)` given by
/// `(ln r1*, ln r2*)`, with the peak guess `hint` in logit coordinates.
fn log_bessel_integral(geom: &DomainGeometry, r: f64, dual_logs: (f64, f64), hint: f64, cfg: &QuadConfig) -> Result<LogQuadrature> {
    let (a1, a2) = dual_logs;
    let lr = (2.0 * r).ln();
    let h = |x: f64| {
        let (l1, l2) = geom.log_radii_x(x);
        log_bessel_i0((lr + l1 + a1).exp()) + log_bessel_i0((lr + l2 + a2).exp()) - softplus(-x) - softplus(x)
    };
    // Small r leaves the uniform ds weight, peaked at s = 1/2.
    let peak = if r > 1.0 { hint } else { 0.0 };
    integrate_log_peaked(h, peak, -X_RANGE, X_RANGE, cfg)
}

/// `ln ‖e^{⟨z,·⟩}‖²_μ` at `z = r (r1*(t), r2*(t))`, i.e.
/// `ln(¼ ∫ I0(2r r1(s) r1*(t)) I0(2r r2(s) r2*(t)) ds)`.
pub fn exp_norm_sq(geom: &DomainGeometry, r: f64, t: f64, cfg: &QuadConfig) -> Result<LogValue> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::domain(format!("r must be positive and finite, got {r}")));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::domain(format!("t = {t} is outside [0, 1]")));
    }
    cfg.validate()?;
    let x = logit(t).clamp(-X_RANGE, X_RANGE);
    let dual = match t {
        0.0 => (f64::NEG_INFINITY, -geom.b2().ln()),
        1.0 => (-geom.b1().ln(), f64::NEG_INFINITY),
        _ => geom.log_dual_radii_x(x),
    };
    let q = log_bessel_integral(geom, r, dual, x.clamp(-40.0, 40.0), cfg)?;
    if !q.converged {
        return Err(Error::NoConvergence { estimate: q.log_value, err_est: q.rel_err });
    }
    Ok(LogValue::from_log(0.25f64.ln() + q.log_value))
}

/// `ln ∫₀^∞ ∫₀¹ r^{2k+1} r1*(t)^{2m1} r2*(t)^{2m2} / E(r, t) dt dr` with
/// `k = m1 + m2` and `E` the exponential norm of [`exp_norm_sq`].
pub fn log_omega_monomial(geom: &DomainGeometry, m1: u32, m2: u32, cfg: &QuadConfig) -> Result<LogQuadrature> {
    cfg.validate()?;
    let (a, b) = (m1 as f64, m2 as f64);
    let k = a + b;
    let inner_cfg = tightened(cfg, 1e-2, 1e-13);
    let mid_cfg = tightened(cfg, 1e-1, 1e-12);
    let t_peak = moment_peak(geom, a, b, MomentKind::Dual);
    let converged = Cell::new(true);
    let failure: Cell<Option<Error>> = Cell::new(None);
    let record = |res: Result<LogQuadrature>| match res {
        Ok(q) => {
            if !q.converged {
                converged.set(false);
            }
            q.log_value
        }
        Err(e) => {
            failure.set(Some(e));
            f64::NAN
        }
    };

    let over_t = |r: f64| -> f64 {
        let h = |x: f64| {
            let (l1, l2) = geom.log_dual_radii_x(x);
            let e = match log_bessel_integral(geom, r, (l1, l2), x.clamp(-40.0, 40.0), &inner_cfg) {
                Ok(q) => {
                    if !q.converged {
                        converged.set(false);
                    }
                    q.log_value
                }
                Err(_) => f64::NAN,
            };
            let mut v = -0.25f64.ln() - e - softplus(-x) - softplus(x);
            if a > 0.0 {
                v += 2.0 * a * l1;
            }
            if b > 0.0 {
                v += 2.0 * b * l2;
            }
            v
        };
        record(integrate_log_peaked(h, t_peak, -X_RANGE, X_RANGE, &mid_cfg))
    };

    let h_r = |r: f64| if r <= 0.0 { f64::NEG_INFINITY } else { (2.0 * k + 1.0) * r.ln() + over_t(r) };
    let out = integrate_log_peaked(h_r, k + 1.25, 0.0, 4.0 * (k + 2.0) + 200.0, cfg);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let mut q = out?;
    if !q.log_value.is_finite() {
        return Err(Error::NoConvergence { estimate: q.log_value, err_est: f64::INFINITY });
    }
    q.converged &= converged.get();
    Ok(q)
}

/// `‖F‖²_ω = ¼ Σ |β|² ∫∫ r^{2k+1} r1*^{2m1} r2*^{2m2} / E dt dr`.
///
/// Monomials are orthogonal for the rotation-invariant weight, so only the
/// diagonal terms appear.
pub fn bergman_omega_norm_sq(geom: &DomainGeometry, beta: &CoefficientGrid, cfg: &QuadConfig) -> Result<NormReport> {
    beta.expect_side(Side::Bergman)?;
    let entries: Vec<_> = beta.iter().collect();
    let terms = entries
        .par_iter()
        .map(|&(m1, m2, c)| {
            let q = log_omega_monomial(geom, m1, m2, cfg)?;
            Ok(Term { m1, m2, log_value: c.norm_sqr().ln() + 0.25f64.ln() + q.log_value, rel_err: q.rel_err, converged: q.converged })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NormReport::from_terms(terms, Convention::ExactParametrized))
}
