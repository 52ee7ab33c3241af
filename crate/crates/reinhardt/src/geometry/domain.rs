use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::classify::{classify, estimate_p_limits, membership, BoundaryClassification, Membership, PLimits};
use crate::geometry::profile::ExponentProfile;
use crate::geometry::radial::RadialTable;
use crate::numerics::{log_add, logit, softplus, QuadConfig};

#[derive(Debug, Clone)]
enum Radial {
    /// Constant exponent: `ln r1 = ln b1 + ln(s)/p`.
    Power { inv_p: f64 },
    Table(Arc<RadialTable>),
}

/// Radial boundary profiles of a domain and of its dual complement, indexed
/// by `s ∈ [0, 1]` or by its logit `x`.
///
/// The boundary is `{(r1(s) e^{iθ1}, r2(s) e^{iθ2})}` and the dual profiles
/// satisfy `r1*(s) r1(s) = s`, `r2*(s) r2(s) = 1 - s`.
#[derive(Debug, Clone)]
pub struct DomainGeometry {
    profile: ExponentProfile,
    radial: Radial,
    // The table describes the dual of this domain; own profiles are its stars.
    dual: bool,
    log_b1: f64,
    log_b2: f64,
    pub p_limits: PLimits,
    pub membership: Membership,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureTriple {
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
    pub kappa_ratio: f64,
    /// `√((s/r1)² + ((1-s)/r2)²)`.
    pub normal_factor: f64,
}

impl CurvatureTriple {
    pub fn recovered_exponent(&self) -> f64 {
        1.0 + self.kappa_ratio * self.normal_factor
    }
}

fn table_tol(cfg: &QuadConfig) -> f64 {
    cfg.rel_tol.min(1e-13)
}

/// Builds the geometry, using closed forms when the exponent is constant.
pub fn domain_from_exponent(profile: &ExponentProfile, cfg: &QuadConfig) -> Result<DomainGeometry> {
    cfg.validate()?;
    let radial = match profile.constant_exponent() {
        Some(p) if p > 1.0 && p.is_finite() => Radial::Power { inv_p: 1.0 / p },
        Some(p) if p.is_finite() => return Err(Error::ExponentOutOfRange { s: 0.5, value: p }),
        Some(_) => return Err(Error::NonEvaluableProfile { s: 0.5, reason: "constant is not finite".into() }),
        None => Radial::Table(Arc::new(RadialTable::build(profile, table_tol(cfg))?)),
    };
    Ok(assemble(profile.clone(), radial, false))
}

/// Like [`domain_from_exponent`] but always integrates the exponent numerically.
pub fn domain_from_exponent_numeric(profile: &ExponentProfile, cfg: &QuadConfig) -> Result<DomainGeometry> {
    cfg.validate()?;
    let table = RadialTable::build(profile, table_tol(cfg))?;
    Ok(assemble(profile.clone(), Radial::Table(Arc::new(table)), false))
}

fn assemble(profile: ExponentProfile, radial: Radial, dual: bool) -> DomainGeometry {
    let p_limits = estimate_p_limits(&profile);
    let membership = membership(&profile, &p_limits);
    DomainGeometry { log_b1: profile.b1.ln(), log_b2: profile.b2.ln(), profile, radial, dual, p_limits, membership }
}

/// Geometry of the dual complement, sharing the radial table.
pub fn dual_complement(geom: &DomainGeometry) -> DomainGeometry {
    let radial = match &geom.radial {
        Radial::Power { inv_p } => Radial::Power { inv_p: 1.0 - inv_p },
        Radial::Table(t) => Radial::Table(Arc::clone(t)),
    };
    let dual = matches!(radial, Radial::Table(_)) && !geom.dual;
    let mut out = assemble(geom.profile.conjugate(), radial, dual);
    // Exact reciprocals keep dual(dual(Ω)) identical to Ω.
    out.log_b1 = -geom.log_b1;
    out.log_b2 = -geom.log_b2;
    out
}

pub fn curvatures_at(geom: &DomainGeometry, s: f64) -> Result<CurvatureTriple> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::domain(format!("s = {s} is outside (0, 1)")));
    }
    let x = logit(s);
    let (r1, r2) = (geom.log_r1_x(x).exp(), geom.log_r2_x(x).exp());
    let p = geom.profile.try_p_check(s)?;
    let (u, v) = (s / r1, (1.0 - s) / r2);
    let n = u.hypot(v);
    let kappa1 = s / (r1 * r1 * n);
    let kappa2 = (1.0 - s) / (r2 * r2 * n);
    let kappa3 = (p - 1.0) * s * (1.0 - s) / (r1 * r1 * r2 * r2) / (n * n * n);
    Ok(CurvatureTriple { kappa1, kappa2, kappa3, kappa_ratio: kappa3 / (kappa1 * kappa2), normal_factor: n })
}

/// `c = 1/sup_{‖z‖=1} H_Ω(z)` and `C = 1/inf_{‖z‖=1} H_Ω(z)`.
///
/// The support function equals 1 on the dual boundary, so these are the
/// smallest and largest Euclidean norms of `(r1*(s), r2*(s))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportConstants {
    pub c_omega: f64,
    pub cap_c_omega: f64,
}

pub fn support_constants(geom: &DomainGeometry) -> SupportConstants {
    let norm = |x: f64| {
        let (l1, l2) = geom.log_dual_radii_x(x);
        0.5 * log_add(2.0 * l1, 2.0 * l2)
    };
    let ends = [(-geom.log_b2), (-geom.log_b1)];
    let xs: Vec<f64> = (0..=1600).map(|i| -40.0 + 0.05 * i as f64).collect();
    let vals: Vec<f64> = xs.iter().map(|x| norm(*x)).collect();
    let refine = |sign: f64| {
        let (k, _) = vals.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (i, v)| if sign * v > acc.1 { (i, sign * v) } else { acc });
        // Golden-section search on the bracketing cell pair.
        let (mut a, mut b) = (xs[k] - 0.05, xs[k] + 0.05);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..60 {
            let (c, d) = (b - g * (b - a), a + g * (b - a));
            if sign * norm(c) > sign * norm(d) {
                b = d;
            } else {
                a = c;
            }
        }
        let best = sign * norm(0.5 * (a + b));
        ends.iter().map(|e| sign * e).fold(best, f64::max) * sign
    };
    SupportConstants { c_omega: refine(-1.0).exp(), cap_c_omega: refine(1.0).exp() }
}

pub fn classify_boundary(geom: &DomainGeometry) -> BoundaryClassification {
    classify(&geom.p_limits)
}

impl DomainGeometry {
    pub fn profile(&self) -> &ExponentProfile {
        &self.profile
    }

    pub fn b1(&self) -> f64 {
        self.log_b1.exp()
    }

    pub fn b2(&self) -> f64 {
        self.log_b2.exp()
    }

    pub fn p_check(&self, s: f64) -> f64 {
        self.profile.p_check(s)
    }

    /// `1/p̌(σ(x))`.
    pub fn inv_p_x(&self, x: f64) -> f64 {
        match &self.radial {
            Radial::Power { inv_p } => *inv_p,
            Radial::Table(_) => 1.0 / self.profile.p_check(crate::geometry::radial::s_of(x)),
        }
    }

    pub fn constant_exponent(&self) -> Option<f64> {
        match self.radial {
            Radial::Power { inv_p } => Some(1.0 / inv_p),
            Radial::Table(_) => None,
        }
    }

    // (ln r1, ln r2) of whichever domain the table describes.
    fn base_logs(&self, x: f64) -> (f64, f64) {
        let (lb1, lb2) = if self.dual { (-self.log_b1, -self.log_b2) } else { (self.log_b1, self.log_b2) };
        match &self.radial {
            Radial::Power { inv_p } => (lb1 - inv_p * softplus(-x), lb2 - inv_p * softplus(x)),
            Radial::Table(t) => (lb1 - t.phi1(x), lb2 - t.phi2(x)),
        }
    }

    fn star(x: f64, (l1, l2): (f64, f64)) -> (f64, f64) {
        (-softplus(-x) - l1, -softplus(x) - l2)
    }

    /// `(ln r1, ln r2)` at `s = σ(x)`.
    pub fn log_radii_x(&self, x: f64) -> (f64, f64) {
        let base = self.base_logs(x);
        if self.dual {
            Self::star(x, base)
        } else {
            base
        }
    }

    /// `(ln r1*, ln r2*)` at `s = σ(x)`.
    pub fn log_dual_radii_x(&self, x: f64) -> (f64, f64) {
        let base = self.base_logs(x);
        if self.dual {
            base
        } else {
            Self::star(x, base)
        }
    }

    pub fn log_r1_x(&self, x: f64) -> f64 {
        self.log_radii_x(x).0
    }

    pub fn log_r2_x(&self, x: f64) -> f64 {
        self.log_radii_x(x).1
    }

    fn at_s(&self, s: f64, f: impl Fn(f64) -> f64) -> f64 {
        assert!((0.0..=1.0).contains(&s), "s = {s} outside [0, 1]");
        f(logit(s)).exp()
    }

    pub fn r1(&self, s: f64) -> f64 {
        if s == 0.0 {
            return 0.0;
        }
        if s == 1.0 {
            return self.b1();
        }
        self.at_s(s, |x| self.log_radii_x(x).0)
    }

    pub fn r2(&self, s: f64) -> f64 {
        if s == 0.0 {
            return self.b2();
        }
        if s == 1.0 {
            return 0.0;
        }
        self.at_s(s, |x| self.log_radii_x(x).1)
    }

    pub fn r1_star(&self, s: f64) -> f64 {
        if s == 0.0 {
            return 0.0;
        }
        if s == 1.0 {
            return (-self.log_b1).exp();
        }
        self.at_s(s, |x| self.log_dual_radii_x(x).0)
    }

    pub fn r2_star(&self, s: f64) -> f64 {
        if s == 0.0 {
            return (-self.log_b2).exp();
        }
        if s == 1.0 {
            return 0.0;
        }
        self.at_s(s, |x| self.log_dual_radii_x(x).1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_profiles() {
        let g = domain_from_exponent(&ExponentProfile::ball(), &QuadConfig::default()).unwrap();
        assert!((g.r1(0.5) - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!((g.r1(0.0), g.r2(0.0)), (0.0, 1.0));
        assert_eq!((g.r1(1.0), g.r2(1.0)), (1.0, 0.0));
    }

    #[test]
    fn egg_dual_is_conjugate_egg() {
        let g = domain_from_exponent(&ExponentProfile::egg(4.0, 1.0, 1.0).unwrap(), &QuadConfig::default()).unwrap();
        let d = dual_complement(&g);
        assert_eq!(d.constant_exponent(), Some(4.0 / 3.0));
        for s in [0.1, 0.5, 0.9] {
            assert!((d.r1(s) * g.r1(s) - s).abs() < 1e-15);
        }
    }

    #[test]
    fn invalid_parameter() {
        let g = domain_from_exponent(&ExponentProfile::ball(), &QuadConfig::default()).unwrap();
        assert!(matches!(curvatures_at(&g, 1.5), Err(Error::Domain(_))));
        assert!(curvatures_at(&g, 0.0).is_err());
    }
}
