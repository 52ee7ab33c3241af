//! Piecewise Chebyshev representation of a running integral `∫_a^x f`.
//!
//! Each panel holds the antiderivative of a degree-24 interpolant; panels
//! are bisected until the trailing coefficients are negligible.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const DEGREE: usize = 24;
const MIN_WIDTH: f64 = 1e-7;
const MAX_PANELS: usize = 20_000;

fn cos_table() -> &'static Vec<[f64; DEGREE + 1]> {
    static TABLE: OnceLock<Vec<[f64; DEGREE + 1]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..=DEGREE)
            .map(|k| {
                let mut row = [0.0; DEGREE + 1];
                for (j, v) in row.iter_mut().enumerate() {
                    *v = (std::f64::consts::PI * (j * k) as f64 / DEGREE as f64).cos();
                }
                row
            })
            .collect()
    })
}

#[derive(Debug, Clone)]
pub struct RunningIntegral {
    breaks: Vec<f64>,
    // Antiderivative coefficients (degree DEGREE+1) per panel, zero at the panel start.
    panels: Vec<[f64; DEGREE + 2]>,
    offsets: Vec<f64>,
    total: f64,
}

impl RunningIntegral {
    /// Builds the running integral of `f` over `[breaks[0], breaks.last()]`.
    /// Interior breakpoints are kept as panel edges (useful at kinks of `f`).
    pub fn build<F: Fn(f64) -> Result<f64>>(f: F, breaks: &[f64], tol: f64) -> Result<Self> {
        if breaks.len() < 2 || breaks.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("running integral needs increasing breakpoints"));
        }
        let mut out = RunningIntegral { breaks: vec![breaks[0]], panels: Vec::new(), offsets: Vec::new(), total: 0.0 };
        for w in breaks.windows(2) {
            let mut stack = vec![(w[0], w[1])];
            while let Some((l, r)) = stack.pop() {
                let coeffs = interpolate(&f, l, r)?;
                let scale = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
                let tail = coeffs[DEGREE].abs().max(coeffs[DEGREE - 1].abs()).max(coeffs[DEGREE - 2].abs());
                if tail > tol * scale + 1e-300 && r - l > MIN_WIDTH && out.panels.len() + stack.len() < MAX_PANELS {
                    let m = 0.5 * (l + r);
                    stack.push((m, r));
                    stack.push((l, m));
                    continue;
                }
                let anti = antiderivative(&coeffs, 0.5 * (r - l));
                out.offsets.push(out.total);
                out.total += clenshaw(&anti, 1.0);
                out.panels.push(anti);
                out.breaks.push(r);
            }
        }
        Ok(out)
    }

    pub fn start(&self) -> f64 {
        self.breaks[0]
    }

    pub fn end(&self) -> f64 {
        *self.breaks.last().expect("at least one panel")
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn panel_count(&self) -> usize {
        self.panels.len()
    }

    /// `∫_start^x f`, with x clamped into the covered range.
    pub fn at(&self, x: f64) -> f64 {
        if x <= self.start() {
            return 0.0;
        }
        if x >= self.end() {
            return self.total;
        }
        let i = self.breaks.partition_point(|b| *b <= x).saturating_sub(1).min(self.panels.len() - 1);
        let (l, r) = (self.breaks[i], self.breaks[i + 1]);
        let t = (2.0 * x - l - r) / (r - l);
        self.offsets[i] + clenshaw(&self.panels[i], t)
    }
}

fn interpolate<F: Fn(f64) -> Result<f64>>(f: &F, l: f64, r: f64) -> Result<[f64; DEGREE + 1]> {
    let table = cos_table();
    let mid = 0.5 * (l + r);
    let half = 0.5 * (r - l);
    let mut vals = [0.0; DEGREE + 1];
    for (j, v) in vals.iter_mut().enumerate() {
        *v = f(mid + half * table[1][j])?;
        if !v.is_finite() {
            return Err(Error::invalid(format!("integrand not finite at {}", mid + half * table[1][j])));
        }
    }
    let mut coeffs = [0.0; DEGREE + 1];
    for (k, c) in coeffs.iter_mut().enumerate() {
        let row = &table[k];
        let mut sum = 0.5 * (vals[0] * row[0] + vals[DEGREE] * row[DEGREE]);
        for j in 1..DEGREE {
            sum += vals[j] * row[j];
        }
        *c = 2.0 * sum / DEGREE as f64;
    }
    coeffs[0] *= 0.5;
    coeffs[DEGREE] *= 0.5;
    Ok(coeffs)
}

fn antiderivative(a: &[f64; DEGREE + 1], half_width: f64) -> [f64; DEGREE + 2] {
    let mut c = [0.0; DEGREE + 2];
    c[1] += a[0];
    c[0] += 0.25 * a[1];
    c[2] += 0.25 * a[1];
    for k in 2..=DEGREE {
        c[k + 1] += a[k] / (2.0 * (k + 1) as f64);
        c[k - 1] -= a[k] / (2.0 * (k - 1) as f64);
    }
    let at_minus_one: f64 = c.iter().enumerate().map(|(k, v)| if k % 2 == 0 { *v } else { -*v }).sum();
    c[0] -= at_minus_one;
    for v in c.iter_mut() {
        *v *= half_width;
    }
    c
}

fn clenshaw(c: &[f64], t: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * t * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    t * b1 - b2 + c[0]
}
