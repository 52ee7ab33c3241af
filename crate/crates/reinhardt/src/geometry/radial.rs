//! Exponent integrals in the logit variable `x = ln(s/(1-s))`.
//!
//! With `s = σ(x)` the two integrals defining the radial profiles become
//!
//! ```text
//! Φ1(x) = ∫_s^1 dt/(t p̌(t))          = ∫_x^∞  (1-σ(ξ))/p̌(σ(ξ)) dξ
//! Φ2(x) = ∫_0^s dt/((1-t) p̌(t))      = ∫_-∞^x σ(ξ)/p̌(σ(ξ)) dξ
//! ```
//!
//! whose integrands are bounded by 1 and decay exponentially at the far end,
//! so `ln r1 = ln b1 - Φ1` and `ln r2 = ln b2 - Φ2` stay accurate for s
//! arbitrarily close to 0 or 1.

use crate::error::Result;
use crate::geometry::profile::ExponentProfile;
use crate::numerics::chebyshev::RunningIntegral;
use crate::numerics::{integrate, logit, sigmoid, softplus, QuadConfig};

pub const X_LO: f64 = -80.0;
pub const X_HI: f64 = 40.0;
/// Largest double below 1.
pub const S_MAX: f64 = 1.0 - f64::EPSILON / 2.0;

/// `σ(x)` kept inside the open unit interval.
pub fn s_of(x: f64) -> f64 {
    sigmoid(x).clamp(f64::MIN_POSITIVE, S_MAX)
}

#[derive(Debug, Clone)]
pub struct RadialTable {
    profile: ExponentProfile,
    head: RunningIntegral,
    tail: RunningIntegral,
    // ∫ beyond X_HI of the head integrand, and below X_LO of the tail integrand.
    head_beyond: f64,
    tail_below: f64,
    p_at_one: f64,
}

impl RadialTable {
    pub fn build(profile: &ExponentProfile, tol: f64) -> Result<Self> {
        let mut breaks: Vec<f64> = (0..=((X_HI - X_LO) as i64)).map(|i| X_LO + i as f64).collect();
        breaks.extend(profile.kinks().into_iter().map(logit).filter(|x| *x > X_LO && *x < X_HI));
        breaks.sort_by(f64::total_cmp);
        breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-9);

        let p = |x: f64| profile.try_p_check(s_of(x));
        let head = RunningIntegral::build(|x| Ok(sigmoid(-x) / p(x)?), &breaks, tol)?;
        let tail = RunningIntegral::build(|x| Ok(sigmoid(x) / p(x)?), &breaks, tol)?;
        let p_at_one = profile.try_p_check(S_MAX)?;
        let p_lo = p(X_LO)?;
        Ok(RadialTable {
            profile: profile.clone(),
            head,
            tail,
            head_beyond: softplus(-X_HI) / p_at_one,
            tail_below: softplus(X_LO) / p_lo,
            p_at_one,
        })
    }

    pub fn profile(&self) -> &ExponentProfile {
        &self.profile
    }

    /// `∫_x^∞ (1-σ)/p̌ dξ`.
    pub fn phi1(&self, x: f64) -> f64 {
        if x >= X_HI {
            return softplus(-x) / self.p_at_one;
        }
        let from_table = self.head.total() - self.head.at(x.max(X_LO)) + self.head_beyond;
        if x >= X_LO {
            return from_table;
        }
        let cfg = QuadConfig::default().with_rel_tol(1e-13);
        let extra = integrate(|xi| sigmoid(-xi) / self.profile.p_check(s_of(xi)), x, X_LO, &cfg)
            .map(|q| q.value)
            .unwrap_or(f64::NAN);
        from_table + extra
    }

    /// `∫_-∞^x σ/p̌ dξ`.
    pub fn phi2(&self, x: f64) -> f64 {
        if x <= X_LO {
            return softplus(x) / self.profile.p_check(s_of(x));
        }
        let from_table = self.tail_below + self.tail.at(x.min(X_HI));
        if x <= X_HI {
            from_table
        } else {
            from_table + (x - X_HI) / self.p_at_one
        }
    }
}
