//! Heuristics on the behaviour of `p̌` near the axes: limits, class
//! membership and boundary type. None of these are proofs; each verdict
//! carries a confidence in [0, 1].

use serde::{Deserialize, Serialize};

use crate::geometry::profile::ExponentProfile;
use crate::numerics::{extrapolate_limit_at, integrate, QuadConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PLimit {
    Finite { value: f64, confidence: f64, raw_tail: f64 },
    Divergent { raw_tail: f64 },
    Inconclusive { raw_tail: f64 },
}

impl PLimit {
    pub fn finite_value(&self) -> Option<f64> {
        match self {
            PLimit::Finite { value, .. } => Some(*value),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PLimits {
    pub at_s0: PLimit,
    pub at_s1: PLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Flag {
    pub value: bool,
    pub confidence: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    /// Divergence of the four exponent integrals at the axes.
    pub in_r_tilde: Flag,
    /// `p̌` extends continuously to [0, 1] with values above 1.
    pub in_r_prime: Flag,
    /// Finite Dini-type integrals of `1/p̌ - 1/p̌(end)` at both ends.
    pub in_r: Flag,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BoundaryType {
    FiniteType { order: u32, confidence: f64 },
    InfiniteType,
    NotC2 { limit: f64 },
    Inconclusive { raw_limit: Option<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryClassification {
    /// Boundary point with s = 0 (on the second coordinate axis).
    pub axis0: BoundaryType,
    /// Boundary point with s = 1 (on the first coordinate axis).
    pub axis1: BoundaryType,
}

const DECADES_AT_ZERO: [f64; 6] = [8.0, 16.0, 32.0, 64.0, 128.0, 256.0];
const DECADES_AT_ONE: [f64; 6] = [4.0, 6.0, 8.0, 10.0, 12.0, 14.0];

/// Limits of `p̌` as s → 0⁺ (sampled at s = 10^-k) and s → 1⁻ (at 1 - 10^-k),
/// extrapolated in 1/k.
pub fn estimate_p_limits(profile: &ExponentProfile) -> PLimits {
    PLimits {
        at_s0: limit_along(&DECADES_AT_ZERO, |k| profile.p_check(10f64.powf(-k))),
        at_s1: limit_along(&DECADES_AT_ONE, |k| profile.p_check(1.0 - 10f64.powf(-k))),
    }
}

fn limit_along(ks: &[f64], p: impl Fn(f64) -> f64) -> PLimit {
    let vals: Vec<f64> = ks.iter().map(|k| p(*k)).collect();
    let raw_tail = *vals.last().expect("non-empty");
    if vals.iter().any(|v| v.is_nan()) {
        return PLimit::Inconclusive { raw_tail };
    }
    if vals.contains(&f64::INFINITY) {
        return PLimit::Divergent { raw_tail };
    }
    let n = vals.len();
    let increasing = vals[n - 4..].windows(2).all(|w| w[1] > w[0]);
    if increasing && vals[n - 1] > 2.0 * vals[n - 4] && vals[n - 1] > 1e3 {
        return PLimit::Divergent { raw_tail };
    }
    match extrapolate_limit_at(ks, &vals) {
        Ok(e) if e.converged => PLimit::Finite { value: e.limit, confidence: e.confidence, raw_tail },
        _ => PLimit::Inconclusive { raw_tail },
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tail {
    Divergent(f64),
    Convergent(f64),
    Unclear,
}

impl Tail {
    fn diverges(self) -> Flag {
        match self {
            Tail::Divergent(c) => Flag { value: true, confidence: c },
            Tail::Convergent(c) => Flag { value: false, confidence: c },
            Tail::Unclear => Flag { value: false, confidence: 0.0 },
        }
    }
}

/// Classifies per-decade increments of a truncated integral: increments
/// that stay comparable (ratio near 1) signal logarithmic or slower
/// divergence; geometric decay signals convergence.
fn tail_verdict(increments: &[f64]) -> Tail {
    tail_verdict_above(increments, 0.0)
}

/// As [`tail_verdict`], with increments below `floor` counted as zero.
fn tail_verdict_above(increments: &[f64], floor: f64) -> Tail {
    let a: Vec<f64> = increments.iter().map(|v| if v.abs() < floor { 0.0 } else { v.abs() }).collect();
    let total: f64 = a.iter().sum();
    if !total.is_finite() {
        return Tail::Divergent(1.0);
    }
    if total <= 1e-300 {
        return Tail::Convergent(1.0);
    }
    let recent = &a[a.len().saturating_sub(7)..];
    let mut log_q = 0.0;
    let mut count = 0.0;
    for w in recent.windows(2) {
        if w[0] == 0.0 || w[1] == 0.0 {
            return Tail::Convergent(1.0);
        }
        log_q += (w[1] / w[0]).ln();
        count += 1.0;
    }
    let q = (log_q / count).exp();
    if q >= 0.85 {
        Tail::Divergent(((q - 0.85) / 0.1).clamp(0.0, 1.0))
    } else if q <= 0.5 {
        Tail::Convergent(((0.5 - q) / 0.4).clamp(0.0, 1.0))
    } else {
        Tail::Unclear
    }
}

const DECADES: usize = 15;

/// Per-decade increments of ∫ g(t) dt/t near t = 0 (`at_one = false`) or of
/// ∫ g(t) dt/(1-t) near t = 1, over [10^-(k+1), 10^-k] in the distance to
/// the endpoint.
fn decade_increments(g: impl Fn(f64) -> f64, at_one: bool) -> Vec<f64> {
    let cfg = QuadConfig::default();
    let ln10 = std::f64::consts::LN_10;
    (1..=DECADES)
        .map(|k| {
            let (u0, u1) = (-(k as f64 + 1.0) * ln10, -(k as f64) * ln10);
            let h = |u: f64| {
                let d = u.exp();
                g(if at_one { 1.0 - d } else { d })
            };
            integrate(h, u0, u1, &cfg).map(|q| q.value).unwrap_or(f64::NAN)
        })
        .collect()
}

pub fn membership(profile: &ExponentProfile, limits: &PLimits) -> Membership {
    let p = |t: f64| profile.p_check(t);
    let conds = [
        tail_verdict(&decade_increments(|t| 1.0 / p(t), false)),
        tail_verdict(&decade_increments(|t| 1.0 / p(t), true)),
        tail_verdict(&decade_increments(|t| 1.0 - 1.0 / p(t), false)),
        tail_verdict(&decade_increments(|t| 1.0 - 1.0 / p(t), true)),
    ];
    let flags: Vec<Flag> = conds.iter().map(|c| c.diverges()).collect();
    let in_r_tilde = Flag {
        value: flags.iter().all(|f| f.value),
        confidence: flags.iter().map(|f| f.confidence).fold(1.0, f64::min),
    };

    let end = |l: &PLimit| match l {
        PLimit::Finite { value, confidence, .. } if *value > 1.0 => Some((*value, *confidence)),
        _ => None,
    };
    let (e0, e1) = (end(&limits.at_s0), end(&limits.at_s1));
    let in_r_prime = match (e0, e1) {
        (Some((_, c0)), Some((_, c1))) if in_r_tilde.value => Flag { value: true, confidence: in_r_tilde.confidence.min(c0).min(c1) },
        (Some(_), Some(_)) => Flag { value: false, confidence: in_r_tilde.confidence },
        _ => Flag { value: false, confidence: 0.5 },
    };

    let in_r = match (e0, e1) {
        (Some((p0, _)), Some((p1, _))) if in_r_prime.value => {
            // The extrapolated end values carry a small error of their own.
            const FLOOR: f64 = 1e-7;
            let near0 = tail_verdict_above(&decade_increments(|t| 1.0 / p(t) - 1.0 / p0, false), FLOOR);
            let near1 = tail_verdict_above(&decade_increments(|t| 1.0 / p(t) - 1.0 / p1, true), FLOOR);
            match (near0, near1) {
                (Tail::Convergent(c0), Tail::Convergent(c1)) => Flag { value: true, confidence: c0.min(c1) },
                (Tail::Divergent(c), _) | (_, Tail::Divergent(c)) => Flag { value: false, confidence: c },
                _ => Flag { value: false, confidence: 0.0 },
            }
        }
        _ => Flag { value: false, confidence: in_r_prime.confidence },
    };
    Membership { in_r_tilde, in_r_prime, in_r }
}

/// Axis classification from the limit of `p̌`: an even integer limit 2m
/// suggests finite type 2m, an infinite limit infinite type, and a limit
/// below 2 rules out C² smoothness.
pub fn classify(limits: &PLimits) -> BoundaryClassification {
    BoundaryClassification { axis0: classify_end(&limits.at_s0), axis1: classify_end(&limits.at_s1) }
}

fn classify_end(limit: &PLimit) -> BoundaryType {
    const TOL: f64 = 1e-3;
    match *limit {
        PLimit::Divergent { .. } => BoundaryType::InfiniteType,
        PLimit::Inconclusive { .. } => BoundaryType::Inconclusive { raw_limit: None },
        PLimit::Finite { value, confidence, raw_tail } => {
            if value < 2.0 - TOL {
                return BoundaryType::NotC2 { limit: value };
            }
            let m = (value / 2.0).round();
            if m >= 1.0 && (value - 2.0 * m).abs() <= TOL * value {
                // A limit that the samples themselves have not reached is a weaker signal.
                let reached = (-(raw_tail - value).abs() / 1e-4).exp();
                BoundaryType::FiniteType { order: 2 * m as u32, confidence: confidence * reached }
            } else {
                BoundaryType::Inconclusive { raw_limit: Some(value) }
            }
        }
    }
}
