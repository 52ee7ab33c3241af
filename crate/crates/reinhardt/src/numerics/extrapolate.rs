use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extrapolation {
    pub limit: f64,
    /// In [0, 1]; 1 means the last two Richardson estimates agree to rounding.
    pub confidence: f64,
    pub converged: bool,
    /// Relative gap between the last two Richardson estimates.
    pub residual: f64,
}

impl Extrapolation {
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::Inconclusive)
        }
    }
}

/// Limit of `seq[i]` as i → ∞, treating term i as sampled at n = i + 1.
pub fn extrapolate_limit(seq: &[f64]) -> Result<Extrapolation> {
    let ns: Vec<f64> = (1..=seq.len()).map(|n| n as f64).collect();
    extrapolate_limit_at(&ns, seq)
}

/// Limit as n → ∞ of values sampled at increasing indices `ns`, by
/// three-point Richardson extrapolation in h = 1/n.
pub fn extrapolate_limit_at(ns: &[f64], seq: &[f64]) -> Result<Extrapolation> {
    if ns.len() != seq.len() {
        return Err(Error::invalid("index and value sequences differ in length"));
    }
    if seq.len() < 4 {
        return Err(Error::invalid("extrapolation needs at least four terms"));
    }
    if seq.iter().chain(ns).any(|v| !v.is_finite()) {
        return Err(Error::invalid("extrapolation input contains non-finite values"));
    }
    if ns.windows(2).any(|w| !(w[1] > w[0]) ) || ns[0] <= 0.0 {
        return Err(Error::invalid("indices must be positive and strictly increasing"));
    }
    let n = seq.len();
    let est = |end: usize| richardson3(&ns[end - 3..end], &seq[end - 3..end]);
    let last = est(n);
    let prev = est(n - 1);
    let tail = seq[n - 1];
    let scale = last.abs().max(tail.abs()).max(1e-300);
    let residual = (last - prev).abs();
    let slack = 1e-13 * scale;

    if n >= 5 {
        let residual_prev = (prev - est(n - 2)).abs();
        if residual > residual_prev * (1.0 + 1e-9) + slack {
            return Ok(Extrapolation { limit: tail, confidence: 0.0, converged: false, residual: residual / scale });
        }
    }
    let d_last = (seq[n - 1] - seq[n - 2]).abs();
    let d_prev = (seq[n - 2] - seq[n - 3]).abs();
    let tail_settles = d_last <= d_prev * (1.0 + 1e-9) + slack;
    let rel = residual / scale;
    let converged = rel < 1e-3 && tail_settles;
    let confidence = if converged { 1.0 / (1.0 + rel / 1e-6) } else { 0.0 };
    Ok(Extrapolation { limit: last, confidence, converged, residual: rel })
}

/// Value at h = 0 of the quadratic through (1/n_i, v_i).
fn richardson3(ns: &[f64], vs: &[f64]) -> f64 {
    let h: Vec<f64> = ns.iter().map(|n| 1.0 / n).collect();
    let mut p = [vs[0], vs[1], vs[2]];
    for level in 1..3 {
        for i in 0..3 - level {
            let (hi, hj) = (h[i], h[i + level]);
            p[i] = (hi * p[i + 1] - hj * p[i]) / (hi - hj);
        }
    }
    p[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_perturbation_is_removed() {
        let seq: Vec<f64> = (1..=12).map(|n| 1.0 + 1.0 / n as f64).collect();
        let e = extrapolate_limit(&seq).unwrap();
        assert!((e.limit - 1.0).abs() < 1e-12);
        assert!(e.converged);
        assert!(e.confidence > 0.99);
    }

    #[test]
    fn constant_sequence() {
        let e = extrapolate_limit(&[1.0; 6]).unwrap();
        assert_eq!(e.limit, 1.0);
        assert!(e.converged);
    }

    #[test]
    fn alternating_sequence_is_inconclusive() {
        let seq: Vec<f64> = (1..=10).map(|n| if n % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let e = extrapolate_limit(&seq).unwrap();
        assert!(!e.converged);
        assert_eq!(e.require_converged(), Err(Error::Inconclusive));
    }

    #[test]
    fn short_input_rejected() {
        assert!(extrapolate_limit(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn explicit_indices() {
        let ns = [16.0, 32.0, 64.0, 128.0];
        let seq: Vec<f64> = ns.iter().map(|n| 2.0 - 3.0 / n + 5.0 / (n * n)).collect();
        let e = extrapolate_limit_at(&ns, &seq).unwrap();
        assert!((e.limit - 2.0).abs() < 1e-12);
    }
}
