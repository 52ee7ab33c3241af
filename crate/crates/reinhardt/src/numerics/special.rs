use crate::error::{Error, Result};
use crate::numerics::logvalue::LogValue;

/// Natural log of the Gamma function for positive arguments.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("log_gamma needs a finite x > 0, got {x}")));
    }
    Ok(libm::lgamma_r(x).0)
}

/// `ln B(x, y) = ln Γ(x) + ln Γ(y) - ln Γ(x+y)`.
pub fn log_beta(x: f64, y: f64) -> Result<f64> {
    Ok(log_gamma(x)? + log_gamma(y)? - log_gamma(x + y)?)
}

/// `ln n!`.
pub fn log_factorial(n: u64) -> f64 {
    libm::lgamma_r(n as f64 + 1.0).0
}

const SERIES_CUTOFF: f64 = 20.0;

/// Modified Bessel function `I_0(x)` in log space.
///
/// Power series up to x = 20, Hankel asymptotic series beyond.
pub fn bessel_i0(x: f64) -> Result<LogValue> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("bessel_i0 needs a finite x >= 0, got {x}")));
    }
    Ok(LogValue::from_log(log_bessel_i0(x)))
}

/// Unchecked `ln I_0(x)` for hot loops; the caller guarantees `x >= 0`.
pub fn log_bessel_i0(x: f64) -> f64 {
    if x <= SERIES_CUTOFF {
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        while term > 1e-17 * sum {
            term *= q / (k * k);
            sum += term;
            k += 1.0;
        }
        sum.ln()
    } else {
        let inv = 1.0 / (8.0 * x);
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        loop {
            let next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) * inv / k;
            if next < 1e-17 * sum || next > term {
                break;
            }
            term = next;
            sum += term;
            k += 1.0;
        }
        x - 0.5 * (2.0 * std::f64::consts::PI * x).ln() + sum.ln()
    }
}
