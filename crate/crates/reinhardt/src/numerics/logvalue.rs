use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// A real number stored as `sign * exp(log_magnitude)`.
///
/// `sign == 0` means the value is exactly zero and `log_magnitude` is ignored
/// (it is kept at `-inf` by every constructor here).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogValue {
    pub log_magnitude: f64,
    pub sign: i8,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue { log_magnitude: f64::NEG_INFINITY, sign: 0 };
    pub const ONE: LogValue = LogValue { log_magnitude: 0.0, sign: 1 };

    pub fn from_log(log_magnitude: f64) -> Self {
        if log_magnitude == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogValue { log_magnitude, sign: 1 }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        match x.partial_cmp(&0.0) {
            Some(Ordering::Greater) => LogValue { log_magnitude: x.ln(), sign: 1 },
            Some(Ordering::Less) => LogValue { log_magnitude: (-x).ln(), sign: -1 },
            _ => Self::ZERO,
        }
    }

    pub fn to_f64(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_magnitude.exp(),
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn mul(self, other: LogValue) -> LogValue {
        if self.sign == 0 || other.sign == 0 {
            return Self::ZERO;
        }
        LogValue { log_magnitude: self.log_magnitude + other.log_magnitude, sign: self.sign * other.sign }
    }

    pub fn div(self, other: LogValue) -> LogValue {
        assert!(other.sign != 0, "division by an exact zero LogValue");
        if self.sign == 0 {
            return Self::ZERO;
        }
        LogValue { log_magnitude: self.log_magnitude - other.log_magnitude, sign: self.sign * other.sign }
    }

    pub fn neg(self) -> LogValue {
        LogValue { sign: -self.sign, ..self }
    }

    pub fn powi(self, n: i32) -> LogValue {
        if n == 0 {
            return Self::ONE;
        }
        if self.sign == 0 {
            return Self::ZERO;
        }
        let sign = if self.sign < 0 && n % 2 != 0 { -1 } else { 1 };
        LogValue { log_magnitude: self.log_magnitude * f64::from(n), sign }
    }

    /// Signed sum without leaving log space.
    pub fn add(self, other: LogValue) -> LogValue {
        if self.sign == 0 {
            return other;
        }
        if other.sign == 0 {
            return self;
        }
        let (big, small) = if self.log_magnitude >= other.log_magnitude { (self, other) } else { (other, self) };
        let d = small.log_magnitude - big.log_magnitude;
        if big.sign == small.sign {
            LogValue { log_magnitude: big.log_magnitude + d.exp().ln_1p(), sign: big.sign }
        } else if d == 0.0 {
            Self::ZERO
        } else {
            LogValue { log_magnitude: big.log_magnitude + (-d.exp()).ln_1p(), sign: big.sign }
        }
    }

    pub fn sub(self, other: LogValue) -> LogValue {
        self.add(other.neg())
    }
}

/// `ln(e^a + e^b)` for plain log magnitudes.
pub fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(sum_i e^{x_i})` computed around the maximum term.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY || m.is_infinite() {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// `ln(1 + e^x)` without overflow.
pub fn softplus(x: f64) -> f64 {
    if x > 36.0 {
        x + (-x).exp()
    } else if x < -36.0 {
        x.exp()
    } else {
        x.exp().ln_1p()
    }
}

/// Logistic function `1/(1+e^{-x})`.
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln(s/(1-s))`.
pub fn logit(s: f64) -> f64 {
    s.ln() - (-s).ln_1p()
}
