use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

/// Largest truncated tail a public [`Pmf`] may carry.
pub const MAX_TRUNCATED_TAIL: f64 = 1e-9;

/// Allowed deviation of `sum(masses) + truncated_tail` from one.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Default tail mass dropped when truncating infinite-support laws.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Masses below this floor are moved into the truncated tail inside
/// convolution chains.
pub const MASS_FLOOR: f64 = 1e-18;

/// A probability mass function on a contiguous window of the nonnegative
/// integers.
///
/// `masses[i]` is the probability of `offset + i`. Mass removed while
/// building an infinite-support law is kept in `truncated_tail` rather than
/// renormalized away, so distances computed from a `Pmf` can report how much
/// of the law they did not see.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPmf")]
pub struct Pmf {
    offset: usize,
    masses: Vec<f64>,
    truncated_tail: f64,
}

#[derive(Deserialize)]
struct RawPmf {
    offset: usize,
    masses: Vec<f64>,
    truncated_tail: f64,
}

impl TryFrom<RawPmf> for Pmf {
    type Error = Error;

    fn try_from(raw: RawPmf) -> Result<Self> {
        Pmf::new(raw.offset, raw.masses, raw.truncated_tail)
    }
}

impl Pmf {
    /// Builds a pmf after checking every invariant.
    pub fn new(offset: usize, masses: Vec<f64>, truncated_tail: f64) -> Result<Self> {
        if let Some(bad) = masses.iter().find(|m| !(0.0..=1.0).contains(*m)) {
            return Err(Error::Invalid(format!("mass {bad} outside [0, 1]")));
        }
        if !(0.0..=MAX_TRUNCATED_TAIL).contains(&truncated_tail) {
            return Err(Error::Invalid(format!(
                "truncated tail {truncated_tail} outside [0, {MAX_TRUNCATED_TAIL}]"
            )));
        }
        let total: f64 = crate::sum::sum(masses.iter().copied()) + truncated_tail;
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Invalid(format!("total mass {total} is not 1")));
        }
        Ok(Self::from_parts(offset, masses, truncated_tail))
    }

    /// Trims zero masses at both ends; no validation.
    pub(crate) fn from_parts(mut offset: usize, mut masses: Vec<f64>, truncated_tail: f64) -> Self {
        while masses.last() == Some(&0.0) && masses.len() > 1 {
            masses.pop();
        }
        let lead = masses
            .iter()
            .take(masses.len().saturating_sub(1))
            .take_while(|&&m| m == 0.0)
            .count();
        if lead > 0 {
            masses.drain(..lead);
            offset += lead;
        }
        if masses.is_empty() {
            masses.push(0.0);
        }
        Self {
            offset,
            masses,
            truncated_tail,
        }
    }

    /// Point mass at `k`.
    pub fn point(k: usize) -> Self {
        Self {
            offset: k,
            masses: vec![1.0],
            truncated_tail: 0.0,
        }
    }

    /// Uniform law on `{lo, ..., hi}`.
    pub fn uniform(lo: usize, hi: usize) -> Result<Self> {
        if hi < lo {
            return Err(Error::Invalid(format!("empty range {lo}..={hi}")));
        }
        let w = 1.0 / (hi - lo + 1) as f64;
        Ok(Self::from_parts(lo, vec![w; hi - lo + 1], 0.0))
    }

    /// Normalizes nonnegative weights on `{offset, offset + 1, ...}`.
    pub fn from_weights(offset: usize, weights: &[f64]) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::Invalid("weights must be finite and nonnegative".into()));
        }
        let total = crate::sum::sum(weights.iter().copied());
        if total <= 0.0 {
            return Err(Error::Invalid("weights sum to zero".into()));
        }
        let masses = weights.iter().map(|w| w / total).collect();
        Ok(Self::from_parts(offset, masses, 0.0))
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn truncated_tail(&self) -> f64 {
        self.truncated_tail
    }

    /// One past the largest support point.
    pub fn end(&self) -> usize {
        self.offset + self.masses.len()
    }

    /// Probability of `k`; zero outside the stored window.
    pub fn mass(&self, k: usize) -> f64 {
        k.checked_sub(self.offset)
            .and_then(|i| self.masses.get(i))
            .copied()
            .unwrap_or(0.0)
    }

    /// `(k, P(k))` pairs over the stored window.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.masses
            .iter()
            .enumerate()
            .map(move |(i, &m)| (self.offset + i, m))
    }

    /// Sum of the stored masses, excluding the truncated tail.
    pub fn total_mass(&self) -> f64 {
        crate::sum::sum(self.masses.iter().copied())
    }

    /// Law of `X + by`.
    pub fn shifted_up(&self, by: usize) -> Self {
        Self {
            offset: self.offset + by,
            ..self.clone()
        }
    }

    /// Law of `X - by`; fails if that would leave the nonnegative integers.
    pub fn shifted_down(&self, by: usize) -> Result<Self> {
        let offset = self
            .offset
            .checked_sub(by)
            .ok_or_else(|| Error::Invalid(format!("cannot shift support at {} down by {by}", self.offset)))?;
        Ok(Self {
            offset,
            ..self.clone()
        })
    }

    /// Largest absolute mass difference over the union of supports.
    pub fn max_abs_diff(&self, other: &Pmf) -> f64 {
        let lo = self.offset.min(other.offset);
        let hi = self.end().max(other.end());
        (lo..hi)
            .map(|k| (self.mass(k) - other.mass(k)).abs())
            .fold(0.0, f64::max)
    }
}

/// Pmf of the sum of two independent draws.
pub fn convolve(p: &Pmf, q: &Pmf) -> Pmf {
    let mut out = vec![0.0; p.masses.len() + q.masses.len() - 1];
    for (i, &a) in p.masses.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        for (j, &b) in q.masses.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    let tail = p.truncated_tail + q.truncated_tail - p.truncated_tail * q.truncated_tail;
    Pmf::from_parts(p.offset + q.offset, out, tail)
}

/// First moment and variance, accumulated with compensated summation.
pub fn mean_var(p: &Pmf) -> (f64, f64) {
    let mut total = CompensatedSum::new();
    let mut first = CompensatedSum::new();
    for (k, m) in p.iter() {
        total.add(m);
        first.add(m * k as f64);
    }
    let mass = total.value();
    let mean = first.value() / mass;
    let mut second = CompensatedSum::new();
    for (k, m) in p.iter() {
        let d = k as f64 - mean;
        second.add(m * d * d);
    }
    (mean, second.value() / mass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_masses() {
        assert!(Pmf::new(0, vec![0.5, 0.6], 0.0).is_err());
        assert!(Pmf::new(0, vec![-0.1, 1.1], 0.0).is_err());
        assert!(Pmf::new(0, vec![1.0], 1e-6).is_err());
        assert!(Pmf::new(0, vec![0.5, 0.5], 0.0).is_ok());
    }

    #[test]
    fn trims_zero_edges() {
        let p = Pmf::new(2, vec![0.0, 0.0, 0.5, 0.5, 0.0], 0.0).unwrap();
        assert_eq!(p.offset(), 4);
        assert_eq!(p.masses(), &[0.5, 0.5]);
        assert_eq!(p.end(), 6);
    }

    #[test]
    fn convolution_identity_and_binomial() {
        let coin = Pmf::new(0, vec![0.5, 0.5], 0.0).unwrap();
        assert_eq!(convolve(&Pmf::point(0), &coin), coin);
        let two = convolve(&coin, &coin);
        assert_eq!(two.offset(), 0);
        assert_eq!(two.masses(), &[0.25, 0.5, 0.25]);
    }

    #[test]
    fn convolution_offsets_add() {
        let p = convolve(&Pmf::point(3), &Pmf::uniform(1, 2).unwrap());
        assert_eq!(p.offset(), 4);
        assert_eq!(p.masses(), &[0.5, 0.5]);
    }

    #[test]
    fn moments_of_simple_laws() {
        assert_eq!(mean_var(&Pmf::point(5)), (5.0, 0.0));
        let (m, v) = mean_var(&Pmf::uniform(0, 2).unwrap());
        assert!((m - 1.0).abs() < 1e-15);
        assert!((v - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn json_shape() {
        let p = Pmf::uniform(1, 2).unwrap();
        let json = serde_json::to_value(&p).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"offset": 1, "masses": [0.5, 0.5], "truncated_tail": 0.0})
        );
        let back: Pmf = serde_json::from_value(json).unwrap();
        assert_eq!(back, p);
        let bad = serde_json::json!({"offset": 0, "masses": [0.2], "truncated_tail": 0.0});
        assert!(serde_json::from_value::<Pmf>(bad).is_err());
    }
}
