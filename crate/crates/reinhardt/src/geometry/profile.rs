use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::expr::Expr;
use crate::geometry::pchip::Pchip;

/// JSON form of a domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DomainSpec {
    Egg { p: f64, a1: f64, a2: f64 },
    Expr { p_check: String, b1: f64, b2: f64 },
    Table { s: Vec<f64>, p: Vec<f64>, b1: f64, b2: f64 },
}

impl DomainSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("domain spec: {e}")))
    }

    pub fn to_profile(&self) -> Result<ExponentProfile> {
        match self {
            DomainSpec::Egg { p, a1, a2 } => ExponentProfile::egg(*p, *a1, *a2),
            DomainSpec::Expr { p_check, b1, b2 } => ExponentProfile::expression(p_check, *b1, *b2),
            DomainSpec::Table { s, p, b1, b2 } => ExponentProfile::tabulated(s, p, *b1, *b2),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    /// `a1|z1|^p + a2|z2|^p < 1`.
    Egg { p: f64, a1: f64, a2: f64 },
    Expression { source: String, expr: Expr },
    /// Monotone interpolant of samples; `conjugate` evaluates `p/(p-1)` of it.
    Tabulated { table: Pchip, conjugate: bool },
}

/// The data `(p̌, b1, b2)` that determines a domain.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentProfile {
    pub kind: ProfileKind,
    pub b1: f64,
    pub b2: f64,
}

fn check_intercept(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be positive and finite, got {v}")))
    }
}

impl ExponentProfile {
    pub fn egg(p: f64, a1: f64, a2: f64) -> Result<Self> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::ExponentOutOfRange { s: 0.5, value: p });
        }
        check_intercept("a1", a1)?;
        check_intercept("a2", a2)?;
        Ok(ExponentProfile { kind: ProfileKind::Egg { p, a1, a2 }, b1: a1.powf(-1.0 / p), b2: a2.powf(-1.0 / p) })
    }

    pub fn ball() -> Self {
        Self::egg(2.0, 1.0, 1.0).expect("valid parameters")
    }

    pub fn expression(source: &str, b1: f64, b2: f64) -> Result<Self> {
        check_intercept("b1", b1)?;
        check_intercept("b2", b2)?;
        let expr = Expr::parse(source)?;
        Ok(ExponentProfile { kind: ProfileKind::Expression { source: source.to_string(), expr }, b1, b2 })
    }

    pub fn tabulated(s: &[f64], p: &[f64], b1: f64, b2: f64) -> Result<Self> {
        check_intercept("b1", b1)?;
        check_intercept("b2", b2)?;
        if s.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::invalid("table abscissae must lie in [0, 1]"));
        }
        if let Some((i, v)) = p.iter().enumerate().find(|(_, v)| !(**v > 1.0)) {
            return Err(Error::ExponentOutOfRange { s: s.get(i).copied().unwrap_or(f64::NAN), value: *v });
        }
        Ok(ExponentProfile { kind: ProfileKind::Tabulated { table: Pchip::new(s, p)?, conjugate: false }, b1, b2 })
    }

    /// `p̌(s)` without validity checks.
    pub fn p_check(&self, s: f64) -> f64 {
        match &self.kind {
            ProfileKind::Egg { p, .. } => *p,
            ProfileKind::Expression { expr, .. } => expr.eval(s),
            ProfileKind::Tabulated { table, conjugate } => {
                let v = table.eval(s);
                if *conjugate {
                    v / (v - 1.0)
                } else {
                    v
                }
            }
        }
    }

    /// `p̌(s)`, rejecting non-finite values and values not above 1.
    pub fn try_p_check(&self, s: f64) -> Result<f64> {
        let v = self.p_check(s);
        if !v.is_finite() {
            return Err(Error::NonEvaluableProfile { s, reason: format!("value {v}") });
        }
        if v <= 1.0 {
            return Err(Error::ExponentOutOfRange { s, value: v });
        }
        Ok(v)
    }

    /// `Some(p)` when `p̌` is constant.
    pub fn constant_exponent(&self) -> Option<f64> {
        match &self.kind {
            ProfileKind::Egg { p, .. } => Some(*p),
            ProfileKind::Expression { expr, .. } if !expr.depends_on_s() => Some(expr.eval(0.5)),
            _ => None,
        }
    }

    /// Interior knots in s where the profile is only C¹.
    pub fn kinks(&self) -> Vec<f64> {
        match &self.kind {
            ProfileKind::Tabulated { table, .. } => table.knots().iter().copied().filter(|s| *s > 0.0 && *s < 1.0).collect(),
            _ => Vec::new(),
        }
    }

    /// Profile of the dual complement: `p̌* = p̌/(p̌-1)`, `b* = 1/b`.
    pub fn conjugate(&self) -> ExponentProfile {
        let (b1, b2) = (1.0 / self.b1, 1.0 / self.b2);
        let kind = match &self.kind {
            ProfileKind::Egg { p, .. } => {
                let q = p / (p - 1.0);
                ProfileKind::Egg { p: q, a1: b1.powf(-q), a2: b2.powf(-q) }
            }
            ProfileKind::Expression { source, expr } => {
                ProfileKind::Expression { source: format!("({source})/(({source})-1)"), expr: expr.conjugate() }
            }
            ProfileKind::Tabulated { table, conjugate } => ProfileKind::Tabulated { table: table.clone(), conjugate: !conjugate },
        };
        ExponentProfile { kind, b1, b2 }
    }

    /// JSON-ready description; a conjugated table is re-sampled at its knots.
    pub fn to_spec(&self) -> DomainSpec {
        match &self.kind {
            ProfileKind::Egg { p, a1, a2 } => DomainSpec::Egg { p: *p, a1: *a1, a2: *a2 },
            ProfileKind::Expression { source, .. } => DomainSpec::Expr { p_check: source.clone(), b1: self.b1, b2: self.b2 },
            ProfileKind::Tabulated { table, .. } => DomainSpec::Table {
                s: table.knots().to_vec(),
                p: table.knots().iter().map(|s| self.p_check(*s)).collect(),
                b1: self.b1,
                b2: self.b2,
            },
        }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            ProfileKind::Egg { p, a1, a2 } => format!("egg(p={p}, a1={a1}, a2={a2})"),
            ProfileKind::Expression { source, .. } => format!("expr({source}; b1={}, b2={})", self.b1, self.b2),
            ProfileKind::Tabulated { table, conjugate } => {
                format!("table({} samples{}; b1={}, b2={})", table.knots().len(), if *conjugate { ", conjugate" } else { "" }, self.b1, self.b2)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn egg_intercepts() {
        let p = ExponentProfile::egg(2.0, 4.0, 1.0).unwrap();
        assert!((p.b1 - 0.5).abs() < 1e-15);
        assert_eq!(p.b2, 1.0);
        assert!(ExponentProfile::egg(1.0, 1.0, 1.0).is_err());
        assert!(ExponentProfile::egg(2.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn conjugation_arithmetic() {
        let e = ExponentProfile::egg(4.0, 1.0, 1.0).unwrap().conjugate();
        assert!((e.p_check(0.3) - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!((e.b1, e.b2), (1.0, 1.0));

        let x = ExponentProfile::expression("2+1/log(10/s)", 1.0, 1.0).unwrap();
        let xd = x.conjugate();
        for s in [0.01, 0.3, 0.77] {
            let p = 2.0 + 1.0 / (10.0 / s as f64).ln();
            let l = 1.0 / (10.0 / s as f64).ln();
            assert_eq!(xd.p_check(s), p / (p - 1.0));
            assert!((xd.p_check(s) - (2.0 + l) / (1.0 + l)).abs() < 1e-15);
        }
    }

    #[test]
    fn spec_json_forms() {
        let egg = DomainSpec::from_json(r#"{"kind":"egg","p":4,"a1":1.0,"a2":1.0}"#).unwrap();
        assert_eq!(egg, DomainSpec::Egg { p: 4.0, a1: 1.0, a2: 1.0 });
        let ex = DomainSpec::from_json(r#"{"kind":"expr","p_check":"2+1/log(10/s)","b1":1.0,"b2":1.0}"#).unwrap();
        assert!(matches!(ex.to_profile().unwrap().kind, ProfileKind::Expression { .. }));
        let t = DomainSpec::from_json(r#"{"kind":"table","s":[0,0.5,1],"p":[2,3,4],"b1":1,"b2":2}"#).unwrap();
        assert_eq!(t.to_profile().unwrap().p_check(1.0), 4.0);
        assert!(DomainSpec::from_json(r#"{"kind":"cube"}"#).is_err());
        assert!(DomainSpec::from_json(r#"{"kind":"table","s":[0,1],"p":[2,0.5],"b1":1,"b2":1}"#).unwrap().to_profile().is_err());
    }
}
