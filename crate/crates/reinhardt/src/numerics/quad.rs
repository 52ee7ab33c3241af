//! One-dimensional quadrature: adaptive Gauss–Kronrod (10/21) and tanh-sinh.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    AdaptiveNested,
    DoubleExponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub scheme: Scheme,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { abs_tol: 1e-300, rel_tol: 1e-10, max_subdivisions: 400, scheme: Scheme::AdaptiveNested }
    }
}

impl QuadConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize, scheme: Scheme) -> Result<Self> {
        let cfg = QuadConfig { abs_tol, rel_tol, max_subdivisions, scheme };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        QuadConfig { rel_tol, ..self }
    }

    pub fn with_scheme(self, scheme: Scheme) -> Self {
        QuadConfig { scheme, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::invalid("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions < 8 {
            return Err(Error::invalid("max_subdivisions must be at least 8"));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadrature {
    pub value: f64,
    pub err_est: f64,
    pub converged: bool,
    pub evaluations: usize,
}

impl Quadrature {
    /// Turns a non-converged result into `Error::NoConvergence`.
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NoConvergence { estimate: self.value, err_est: self.err_est })
        }
    }
}

/// Integrates `f` over `(a, b)`; either bound may be infinite.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<Quadrature> {
    cfg.validate()?;
    if a.is_nan() || b.is_nan() {
        return Err(Error::invalid("NaN integration bound"));
    }
    if a == b {
        return Ok(Quadrature { value: 0.0, err_est: 0.0, converged: true, evaluations: 0 });
    }
    if a > b {
        let q = integrate(f, b, a, cfg)?;
        return Ok(Quadrature { value: -q.value, ..q });
    }
    match (a.is_finite(), b.is_finite()) {
        (true, true) => finite(&f, a, b, cfg),
        (true, false) => {
            let g = |t: f64| {
                let u = 1.0 - t;
                f(a + t / u) / (u * u)
            };
            finite(&g, 0.0, 1.0, cfg)
        }
        (false, true) => {
            let g = |t: f64| {
                let u = 1.0 - t;
                f(b - t / u) / (u * u)
            };
            finite(&g, 0.0, 1.0, cfg)
        }
        (false, false) => {
            let g = |t: f64| {
                let u = 1.0 - t * t;
                f(t / u) * (1.0 + t * t) / (u * u)
            };
            finite(&g, -1.0, 1.0, cfg)
        }
    }
}

fn finite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, cfg: &QuadConfig) -> Result<Quadrature> {
    match cfg.scheme {
        Scheme::AdaptiveNested => gauss_kronrod(f, &[a, b], cfg),
        Scheme::DoubleExponential => tanh_sinh(f, a, b, cfg),
    }
}

/// Adaptive Gauss–Kronrod over a finite interval pre-split at `breaks`
/// (sorted, at least two points).
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(f: F, breaks: &[f64], cfg: &QuadConfig) -> Result<Quadrature> {
    cfg.validate()?;
    if breaks.len() < 2 || breaks.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("breakpoints must be at least two finite values"));
    }
    if breaks.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("breakpoints must be sorted"));
    }
    gauss_kronrod(&f, breaks, cfg)
}

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Gauss weights for the nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err).then_with(|| other.a.total_cmp(&self.a))
    }
}

fn qk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    if !resk.is_finite() {
        return Err(Error::invalid(format!("integrand is not finite on [{a}, {b}]")));
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Segment { a, b, value, err })
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, breaks: &[f64], cfg: &QuadConfig) -> Result<Quadrature> {
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            heap.push(qk21(f, w[0], w[1])?);
            evaluations += 21;
        }
    }
    let totals = |heap: &BinaryHeap<Segment>| {
        let mut segs: Vec<&Segment> = heap.iter().collect();
        segs.sort_by(|x, y| x.a.total_cmp(&y.a));
        segs.iter().fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.err))
    };
    let budget = cfg.max_subdivisions.max(breaks.len());
    loop {
        let (value, err) = totals(&heap);
        if err <= cfg.target(value) {
            return Ok(Quadrature { value, err_est: err, converged: true, evaluations });
        }
        if heap.len() >= budget {
            return Ok(Quadrature { value, err_est: err, converged: false, evaluations });
        }
        let worst = heap.pop().expect("heap is never empty here");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // Interval cannot be split further in floating point.
            heap.push(Segment { err: 0.0, ..worst });
            let (value, err) = totals(&heap);
            let converged = err + worst.err <= cfg.target(value);
            return Ok(Quadrature { value, err_est: err + worst.err, converged, evaluations });
        }
        heap.push(qk21(f, worst.a, mid)?);
        heap.push(qk21(f, mid, worst.b)?);
        evaluations += 42;
    }
}

fn tanh_sinh<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, cfg: &QuadConfig) -> Result<Quadrature> {
    use std::f64::consts::FRAC_PI_2;
    let half = 0.5 * (b - a);
    let center = 0.5 * (a + b);
    let max_level = cfg.max_subdivisions.clamp(8, 14);
    let mut evaluations = 0;

    // Sum of w_j f(x_j) over t = j h for the given parity of j (or all j at level 0).
    let mut level_sum = |h: f64, step: usize, start: usize| -> Result<(f64, f64)> {
        let mut sum = 0.0;
        let mut abs_sum = 0.0;
        if start == 0 {
            let fc = f(center);
            evaluations += 1;
            sum += FRAC_PI_2 * fc;
            abs_sum += FRAC_PI_2 * fc.abs();
        }
        let mut j = start.max(1);
        loop {
            let t = j as f64 * h;
            let u = FRAC_PI_2 * t.sinh();
            let ch = u.cosh();
            let w = FRAC_PI_2 * t.cosh() / (ch * ch);
            // Distance from the nearer endpoint, computed without cancellation.
            let delta = (b - a) / ((2.0 * u).exp() + 1.0);
            if w < 1e-300 || !(a + delta > a) || !(b - delta < b) {
                break;
            }
            let fl = f(a + delta);
            let fr = f(b - delta);
            evaluations += 2;
            let pair = fl + fr;
            if !pair.is_finite() {
                return Err(Error::invalid(format!("integrand is not finite near the ends of [{a}, {b}]")));
            }
            sum += w * pair;
            abs_sum += w * (fl.abs() + fr.abs());
            j += step;
        }
        Ok((sum, abs_sum))
    };

    let mut h = 1.0;
    let (mut sum, mut abs_sum) = level_sum(h, 1, 0)?;
    let mut estimate = half * h * sum;
    let mut err = f64::INFINITY;
    for level in 1..=max_level {
        h *= 0.5;
        let (s_odd, a_odd) = level_sum(h, 2, 1)?;
        sum += s_odd;
        abs_sum += a_odd;
        let next = half * h * sum;
        let floor = 10.0 * f64::EPSILON * half * h * abs_sum;
        err = (next - estimate).abs().max(floor);
        estimate = next;
        if level >= 3 && err <= cfg.target(estimate) {
            return Ok(Quadrature { value: estimate, err_est: err, converged: true, evaluations });
        }
    }
    Ok(Quadrature { value: estimate, err_est: err, converged: false, evaluations })
}

/// Result of a log-space integral `ln ∫ exp(h(x)) dx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogQuadrature {
    pub log_value: f64,
    pub rel_err: f64,
    pub converged: bool,
}

/// Computes `ln ∫_lo^hi exp(h(x)) dx` for a unimodal log-integrand whose
/// maximum lies near `peak`. The range is cut where `h` has fallen 46 nats
/// below its peak and split geometrically around the peak before refinement.
pub fn integrate_log_peaked<H: Fn(f64) -> f64>(h: H, peak: f64, lo: f64, hi: f64, cfg: &QuadConfig) -> Result<LogQuadrature> {
    const DROP: f64 = 46.0;
    if !(lo < hi) {
        return Err(Error::invalid("empty integration range"));
    }
    let mut xp = peak.clamp(lo, hi);
    let mut hp = h(xp);

    // A few parabolic steps to sharpen the peak and read off a width.
    let mut width = 1.0_f64;
    let mut delta = 1e-2_f64.min(0.25 * (hi - lo));
    for _ in 0..16 {
        let xl = (xp - delta).max(lo);
        let xr = (xp + delta).min(hi);
        let (fl, fr) = (h(xl), h(xr));
        if fl > hp || fr > hp {
            let (x, v) = if fl > fr { (xl, fl) } else { (xr, fr) };
            xp = x;
            hp = v;
            delta = (2.0 * delta).min(0.25 * (hi - lo));
            continue;
        }
        let curv = (fr - 2.0 * hp + fl) / (delta * delta);
        if curv < 0.0 && curv.is_finite() {
            width = (1.0 / (-curv).sqrt()).clamp(1e-8, hi - lo);
            let slope = (fr - fl) / (2.0 * delta);
            let step = (slope / -curv).clamp(-delta, delta);
            let x = (xp + step).clamp(lo, hi);
            let v = h(x);
            if v > hp {
                xp = x;
                hp = v;
            }
        }
        if width > 10.0 * delta || delta < 1e-6 {
            break;
        }
        delta = (0.5 * width).max(1e-6);
    }
    if hp == f64::NEG_INFINITY {
        return Ok(LogQuadrature { log_value: f64::NEG_INFINITY, rel_err: 0.0, converged: true });
    }
    if !hp.is_finite() {
        return Err(Error::invalid(format!("log-integrand not finite at its peak ({hp})")));
    }

    let reach = |dir: f64| -> f64 {
        let mut d = width;
        loop {
            let x = xp + dir * d;
            if (dir < 0.0 && x <= lo) || (dir > 0.0 && x >= hi) {
                return if dir < 0.0 { lo } else { hi };
            }
            if h(x) < hp - DROP {
                return x;
            }
            d *= 2.0;
        }
    };
    let left = reach(-1.0);
    let right = reach(1.0);

    let mut breaks = vec![left];
    let mut offs = Vec::new();
    let mut d = width;
    while xp - d > left {
        offs.push(xp - d);
        d *= 3.0;
    }
    breaks.extend(offs.into_iter().rev());
    if xp > left && xp < right {
        breaks.push(xp);
    }
    let mut d = width;
    while xp + d < right {
        breaks.push(xp + d);
        d *= 3.0;
    }
    breaks.push(right);

    let q = integrate_with_breaks(|x| (h(x) - hp).exp(), &breaks, cfg)?;
    if !(q.value > 0.0) {
        return Err(Error::invalid("log-space integral is not positive"));
    }
    Ok(LogQuadrature { log_value: hp + q.value.ln(), rel_err: q.err_est / q.value, converged: q.converged })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_on_unit_interval() {
        let q = integrate(|s| s, 0.0, 1.0, &QuadConfig::default()).unwrap();
        assert!((q.value - 0.5).abs() < 1e-12);
        assert!(q.converged);
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let q = integrate(|s| s * s, 1.0, 0.0, &QuadConfig::default()).unwrap();
        assert!((q.value + 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn config_validation() {
        assert!(QuadConfig::new(0.0, 1e-8, 100, Scheme::AdaptiveNested).is_err());
        assert!(QuadConfig::new(1e-12, 1e-8, 4, Scheme::AdaptiveNested).is_err());
        assert!(QuadConfig::new(1e-12, 1e-8, 8, Scheme::DoubleExponential).is_ok());
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let cfg = QuadConfig { max_subdivisions: 8, rel_tol: 1e-15, ..QuadConfig::default() };
        let q = integrate(|x: f64| (1.0 / x).sin(), 1e-4, 1.0, &cfg).unwrap();
        assert!(!q.converged);
        assert!(q.require_converged().is_err());
    }

    #[test]
    fn peaked_log_integral_of_a_narrow_gaussian() {
        let s = 1e-3;
        let q = integrate_log_peaked(|x| -0.5 * ((x - 3.0) / s).powi(2) + 700.0, 2.9, -50.0, 50.0, &QuadConfig::default()).unwrap();
        let exact = 700.0 + (s * (2.0 * std::f64::consts::PI).sqrt()).ln();
        assert!((q.log_value - exact).abs() < 1e-10);
    }
}
