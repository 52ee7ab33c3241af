use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which expansion the amplitudes belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Hardy-space coefficients `a` of `f = Σ a z^m`.
    Hardy,
    /// Entire-function coefficients `β` of `F = Σ β z^m`.
    Bergman,
    /// Laplace coefficients `t`.
    Laplace,
}

/// Finitely supported monomial coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridJson", into = "GridJson")]
pub struct CoefficientGrid {
    pub side: Side,
    entries: BTreeMap<(u32, u32), Complex64>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    m1: u32,
    m2: u32,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct GridJson {
    side: Side,
    entries: Vec<EntryJson>,
}

impl TryFrom<GridJson> for CoefficientGrid {
    type Error = Error;

    fn try_from(g: GridJson) -> Result<Self> {
        let mut out = CoefficientGrid::new(g.side);
        for e in g.entries {
            if !(e.re.is_finite() && e.im.is_finite()) {
                return Err(Error::invalid(format!("amplitude at ({}, {}) is not finite", e.m1, e.m2)));
            }
            if out.entries.insert((e.m1, e.m2), Complex64::new(e.re, e.im)).is_some() {
                return Err(Error::invalid(format!("index ({}, {}) appears twice", e.m1, e.m2)));
            }
        }
        Ok(out)
    }
}

impl From<CoefficientGrid> for GridJson {
    fn from(g: CoefficientGrid) -> Self {
        GridJson { side: g.side, entries: g.entries.into_iter().map(|((m1, m2), c)| EntryJson { m1, m2, re: c.re, im: c.im }).collect() }
    }
}

impl CoefficientGrid {
    pub fn new(side: Side) -> Self {
        CoefficientGrid { side, entries: BTreeMap::new() }
    }

    /// A single monomial with the given amplitude.
    pub fn monomial(side: Side, m1: u32, m2: u32, amplitude: Complex64) -> Self {
        let mut g = Self::new(side);
        g.insert(m1, m2, amplitude);
        g
    }

    /// Random grid with up to `terms` entries of degree at most `max_degree`
    /// in each variable; amplitudes have parts uniform in `[-1, 1]`.
    pub fn random_sparse(side: Side, terms: usize, max_degree: u32, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = Self::new(side);
        for _ in 0..terms {
            let (m1, m2) = (rng.random_range(0..=max_degree), rng.random_range(0..=max_degree));
            g.insert(m1, m2, Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)));
        }
        g
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("coefficient grid: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("grid serialises")
    }

    pub fn insert(&mut self, m1: u32, m2: u32, amplitude: Complex64) {
        self.entries.insert((m1, m2), amplitude);
    }

    pub fn get(&self, m1: u32, m2: u32) -> Complex64 {
        self.entries.get(&(m1, m2)).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32, Complex64)> + '_ {
        self.entries.iter().map(|(&(m1, m2), &c)| (m1, m2, c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest `(m1, m2)` degrees present, or `(0, 0)` when empty.
    pub fn max_degrees(&self) -> (u32, u32) {
        self.entries.keys().fold((0, 0), |(a, b), &(m1, m2)| (a.max(m1), b.max(m2)))
    }

    pub(crate) fn expect_side(&self, side: Side) -> Result<()> {
        if self.side != side {
            return Err(Error::invalid(format!("expected a {side:?} grid, got {:?}", self.side)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let text = r#"{"side":"hardy","entries":[{"m1":0,"m2":0,"re":1.0,"im":0.0},{"m1":2,"m2":1,"re":0.5,"im":-0.25}]}"#;
        let g = CoefficientGrid::from_json(text).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.get(2, 1), Complex64::new(0.5, -0.25));
        assert_eq!(g.to_json(), text);
        assert_eq!(g.max_degrees(), (2, 1));
    }

    #[test]
    fn duplicates_are_rejected() {
        let text = r#"{"side":"bergman","entries":[{"m1":1,"m2":1,"re":1.0,"im":0.0},{"m1":1,"m2":1,"re":2.0,"im":0.0}]}"#;
        assert!(CoefficientGrid::from_json(text).is_err());
        assert!(CoefficientGrid::from_json(r#"{"side":"hardy","entries":[{"m1":-1,"m2":0,"re":1,"im":0}]}"#).is_err());
    }
}
