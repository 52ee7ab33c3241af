use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::DomainGeometry;
use crate::numerics::sigmoid;

/// Exponents must stay inside `(1 + DELTA, P_MAX)` for the comparison bounds.
pub const DELTA: f64 = 1e-3;
pub const P_MAX: f64 = 1e6;
/// Absolute slack allowed when counting violations.
pub const SLACK: f64 = 1e-9;

/// `F_Ω = r1(s) r1*(t) cos θ1 + r2(s) r2*(t) cos θ2`.
#[allow(non_snake_case)]
pub fn F_omega(geom: &DomainGeometry, s: f64, t: f64, theta1: f64, theta2: f64) -> f64 {
    geom.r1(s) * geom.r1_star(t) * theta1.cos() + geom.r2(s) * geom.r2_star(t) * theta2.cos()
}

fn f_ball(s: f64, t: f64, theta1: f64, theta2: f64) -> f64 {
    (s * t).sqrt() * theta1.cos() + ((1.0 - s) * (1.0 - t)).sqrt() * theta2.cos()
}

/// Infimum and supremum of `p̌` over `(0, 1)`, sampled on a logit grid
/// together with the estimated end limits.
pub fn exponent_bounds(geom: &DomainGeometry) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..=1200 {
        let s = sigmoid(-30.0 + 0.05 * i as f64);
        let p = geom.profile().try_p_check(s).map_err(|e| Error::HypothesisNotMet(format!("exponent not evaluable: {e}")))?;
        lo = lo.min(p);
        hi = hi.max(p);
    }
    for lim in [&geom.p_limits.at_s0, &geom.p_limits.at_s1] {
        match lim.finite_value() {
            Some(v) => {
                lo = lo.min(v);
                hi = hi.max(v);
            }
            None => return Err(Error::HypothesisNotMet("the exponent has no finite end limit".into())),
        }
    }
    if !(lo > 1.0 + DELTA && hi < P_MAX) {
        return Err(Error::HypothesisNotMet(format!("exponent range [{lo}, {hi}] leaves ({}, {P_MAX})", 1.0 + DELTA)));
    }
    Ok((lo, hi))
}

/// `C_p` with `1 - F_ball ≤ C_p (1 - F_egg)`: `p/2` for `p ≥ 2`, `p/(2p-2)` below.
pub fn egg_comparison_constant(p: f64) -> f64 {
    if p >= 2.0 {
        p / 2.0
    } else {
        p / (2.0 * p - 2.0)
    }
}

fn conjugate(q: f64) -> f64 {
    q / (q - 1.0)
}

/// Theoretical `[C1, C2]` bracketing `(1 - F_Ω)/(1 - F_ball)`.
pub fn comparison_constants(p_low: f64, p_high: f64) -> (f64, f64) {
    let c = egg_comparison_constant(p_low);
    let c1 = p_low / (p_high * c);
    // Dual exponents swap extremes: sup p̌* = p_low*, inf p̌* = p_high*.
    let c2 = conjugate(p_low) / conjugate(p_high) * 2.0 / conjugate(2.0 * c);
    (c1, c2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub grid_size: usize,
    pub p_low: f64,
    pub p_high: f64,
    /// Extremes of `(1 - F_Ω)/(1 - F_ball)` over samples with `1 - F_ball > 1e-8`.
    pub empirical_min: f64,
    pub empirical_max: f64,
    pub theory_c1: f64,
    pub theory_c2: f64,
    /// Samples with `C1 (1 - F_ball) - (1 - F_Ω) > SLACK`.
    pub lower_violations: usize,
    /// Samples with `(1 - F_Ω) - C2 (1 - F_ball) > SLACK`.
    pub upper_violations: usize,
    pub pass: bool,
}

/// Samples `(1 - F_Ω)/(1 - F_ball)` on `(0,1)² × (0,π/2)²`: `n_samples`
/// uniform points plus a 32×32 grid in `(s, t)` at each angle corner.
pub fn verify_comparison_lemma(geom: &DomainGeometry, n_samples: usize, seed: u64) -> Result<ComparisonReport> {
    let (p_low, p_high) = exponent_bounds(geom)?;
    let (c1, c2) = comparison_constants(p_low, p_high);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let open = |rng: &mut ChaCha8Rng, hi: f64| loop {
        let v: f64 = rng.random_range(0.0..hi);
        if v > 0.0 {
            return v;
        }
    };
    let mut points: Vec<[f64; 4]> = (0..n_samples).map(|_| [open(&mut rng, 1.0), open(&mut rng, 1.0), open(&mut rng, FRAC_PI_2), open(&mut rng, FRAC_PI_2)]).collect();
    for (a, b) in [(0.0, 0.0), (0.0, FRAC_PI_2), (FRAC_PI_2, 0.0), (FRAC_PI_2, FRAC_PI_2)] {
        for i in 0..32 {
            for j in 0..32 {
                points.push([(i as f64 + 0.5) / 32.0, (j as f64 + 0.5) / 32.0, a, b]);
            }
        }
    }

    let evals: Vec<(f64, f64)> = points
        .par_iter()
        .map(|&[s, t, a, b]| (1.0 - f_ball(s, t, a, b), 1.0 - F_omega(geom, s, t, a, b)))
        .collect();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut low_v, mut up_v) = (0, 0);
    for &(db, dw) in &evals {
        if db > 1e-8 {
            lo = lo.min(dw / db);
            hi = hi.max(dw / db);
        }
        if c1 * db - dw > SLACK {
            low_v += 1;
        }
        if dw - c2 * db > SLACK {
            up_v += 1;
        }
    }
    Ok(ComparisonReport {
        grid_size: points.len(),
        p_low,
        p_high,
        empirical_min: lo,
        empirical_max: hi,
        theory_c1: c1,
        theory_c2: c2,
        lower_violations: low_v,
        upper_violations: up_v,
        pass: low_v == 0 && up_v == 0,
    })
}
