//! Witness series on the L¹ ball `{|z1| + |z2| < 1}`.
//!
//! On that domain the moments are `I(m1, m2) = (2m1)! (2m2)! / (2m1 + 2m2 + 1)!`,
//! the ν-series weight is `Γ(2k + 5/2)/2^{2k}` and the ω-series weight is
//! `(2k + 1)!/2^{2k}` with `k = m1 + m2`. Both witnesses live on the diagonal
//! `m1 = m2 = k`:
//!
//! * `G` with `t_k = 2^{2k} / (k^{3/4} ((4k+1)!)^{1/2})`,
//! * `F` with `b_k = 2^{2k} / (k^{3/4} Γ(4k + 5/2)^{1/2})`,
//!
//! and `a_k = conj(b_k) (4k+1)! (k!)² / ((2k)!)²` is the Hardy preimage of `F`
//! up to a constant factor.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{log_factorial, log_gamma};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailLaw {
    /// Least-squares slope of `ln term_k` against `ln k` over `[K/10, K]`.
    pub exponent: f64,
    /// `k^{-exponent} term_k` at `k = K`.
    pub constant: f64,
    pub k_range: (u32, u32),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailLaws {
    pub omega_g: TailLaw,
    pub nu_g: TailLaw,
    pub nu_f: TailLaw,
    pub hardy_f: TailLaw,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub k_max: u32,
    /// Partial sums for `k = 1..=k_max` of the Hardy series of the preimage of `F`.
    pub hardy_partial_sums: Vec<f64>,
    /// ν-series of `F`.
    pub bergman_nu_partial_sums: Vec<f64>,
    /// ν-series of `G`.
    pub bergman_nu_partial_sums_g: Vec<f64>,
    /// ω-series of `G`.
    pub bergman_omega_partial_sums: Vec<f64>,
    pub tail_law_estimates: TailLaws,
    /// Relative growth of each partial sum over the last decade of `k`.
    pub last_decade_growth: [f64; 4],
    pub interpretation: String,
}

fn ln_l1_moment(k: u64) -> f64 {
    2.0 * log_factorial(2 * k) - log_factorial(4 * k + 1)
}

fn ln_nu_weight(k: u64) -> f64 {
    // Total degree 2k.
    log_gamma(4.0 * k as f64 + 2.5).expect("positive") - 4.0 * k as f64 * 2f64.ln()
}

fn ln_omega_weight(k: u64) -> f64 {
    log_factorial(4 * k + 1) - 4.0 * k as f64 * 2f64.ln()
}

/// `ln |t_k|²` for `G`.
pub fn ln_t_sq(k: u64) -> f64 {
    4.0 * k as f64 * 2f64.ln() - 1.5 * (k as f64).ln() - log_factorial(4 * k + 1)
}

/// `ln |b_k|²` for `F`.
pub fn ln_b_sq(k: u64) -> f64 {
    4.0 * k as f64 * 2f64.ln() - 1.5 * (k as f64).ln() - log_gamma(4.0 * k as f64 + 2.5).expect("positive")
}

/// `ln |a_k|²` for the Hardy preimage of `F`.
pub fn ln_a_sq(k: u64) -> f64 {
    ln_b_sq(k) + 2.0 * (log_factorial(4 * k + 1) + 2.0 * log_factorial(k) - 2.0 * log_factorial(2 * k))
}

/// `ln` of the k-th Hardy term `|a_k|² I(k, k)`.
pub fn ln_hardy_term(k: u64) -> f64 {
    ln_a_sq(k) + ln_l1_moment(k)
}

fn fit(terms: &[f64], k_max: u32) -> TailLaw {
    let k0 = (k_max / 10).max(1);
    let pts: Vec<(f64, f64)> = (k0..=k_max).map(|k| ((k as f64).ln(), terms[k as usize - 1])).collect();
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let exponent = sxy / sxx;
    let last = pts.last().expect("non-empty");
    TailLaw { exponent, constant: (last.1 - exponent * last.0).exp(), k_range: (k0, k_max) }
}

fn partial_sums(log_terms: &[f64]) -> Vec<f64> {
    log_terms
        .iter()
        .scan(0.0, |acc, l| {
            *acc += l.exp();
            Some(*acc)
        })
        .collect()
}

pub fn l1ball_counterexample(k_max: u32) -> Result<CounterexampleReport> {
    if k_max < 10 {
        return Err(Error::invalid(format!("K_max must be at least 10, got {k_max}")));
    }
    let ks = 1..=k_max as u64;
    let omega_g: Vec<f64> = ks.clone().map(|k| ln_t_sq(k) + ln_omega_weight(k)).collect();
    let nu_g: Vec<f64> = ks.clone().map(|k| ln_t_sq(k) + ln_nu_weight(k)).collect();
    let nu_f: Vec<f64> = ks.clone().map(|k| ln_b_sq(k) + ln_nu_weight(k)).collect();
    let hardy: Vec<f64> = ks.map(ln_hardy_term).collect();

    let sums = [partial_sums(&hardy), partial_sums(&nu_f), partial_sums(&nu_g), partial_sums(&omega_g)];
    let k_prev = (k_max / 10) as usize;
    let growth = |s: &Vec<f64>| s[s.len() - 1] / s[k_prev - 1] - 1.0;
    let last_decade_growth = [growth(&sums[0]), growth(&sums[1]), growth(&sums[2]), growth(&sums[3])];
    let laws = TailLaws { omega_g: fit(&omega_g, k_max), nu_g: fit(&nu_g, k_max), nu_f: fit(&nu_f, k_max), hardy_f: fit(&hardy, k_max) };
    let interpretation = format!(
        "G: omega-series terms decay like k^{:.3} (summable) while its nu-series terms decay like k^{:.3} (harmonic, partial sums grow by {:.1}% over the last decade), so G lies in A²(ω) but not A²(ν). \
         F: nu-series terms decay like k^{:.3} (summable) while the Hardy series of its only possible preimage decays like k^{:.3}, so F lies in A²(ν) but not in the Laplace image of H². \
         Evidence for L(H²) ⊊ A²(ν) ⊊ A²(ω) on the L¹ ball.",
        laws.omega_g.exponent,
        laws.nu_g.exponent,
        100.0 * last_decade_growth[2],
        laws.nu_f.exponent,
        laws.hardy_f.exponent
    );
    let [hardy_partial_sums, bergman_nu_partial_sums, bergman_nu_partial_sums_g, bergman_omega_partial_sums] = sums;
    Ok(CounterexampleReport {
        k_max,
        hardy_partial_sums,
        bergman_nu_partial_sums,
        bergman_nu_partial_sums_g,
        bergman_omega_partial_sums,
        tail_law_estimates: laws,
        last_decade_growth,
        interpretation,
    })
}
