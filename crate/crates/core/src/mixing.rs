//! Mixing measures on `[0, inf)` and the mixed Poisson laws they induce.

use serde::{Deserialize, Serialize};

use crate::distributions::{check_tol, poisson_pmf, HarmonicTable, Pmf};
use crate::error::{domain, Error, Result};
use crate::exact_depth::JointGN;
use crate::quadrature::integrate_vec;
use crate::sum::CompensatedSum;

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const WEIGHT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: f64,
    pub weight: f64,
}

/// A probability measure on the nonnegative half line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MixingMeasure {
    /// Finitely many atoms, sorted by location with distinct locations.
    Discrete { atoms: Vec<Atom> },
    /// Law of `(c - 2X)^+` with `X` exponential of mean one: an atom of mass
    /// `exp(-c/2)` at zero plus density `exp(-(c - x)/2) / 2` on `(0, c)`.
    /// For `c <= 0` this is the point mass at zero.
    ExpReflected { c: f64 },
}

impl MixingMeasure {
    /// Sorts atoms, merges equal locations and drops zero weights.
    pub fn discrete(atoms: impl IntoIterator<Item = Atom>) -> Result<Self> {
        let mut atoms: Vec<Atom> = atoms.into_iter().collect();
        for a in &atoms {
            if !(a.location >= 0.0 && a.location.is_finite()) {
                return Err(domain!("atom location {} must be finite and nonnegative", a.location));
            }
            if !(a.weight >= 0.0 && a.weight.is_finite()) {
                return Err(domain!("atom weight {} must be finite and nonnegative", a.weight));
            }
        }
        let total = crate::sum::sum(atoms.iter().map(|a| a.weight));
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::Invalid(format!("atom weights sum to {total}, not 1")));
        }
        atoms.sort_by(|a, b| a.location.total_cmp(&b.location));
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms.into_iter().filter(|a| a.weight > 0.0) {
            match merged.last_mut() {
                Some(last) if last.location == a.location => last.weight += a.weight,
                _ => merged.push(a),
            }
        }
        Ok(Self::Discrete { atoms: merged })
    }

    pub fn point(location: f64) -> Result<Self> {
        Self::discrete([Atom {
            location,
            weight: 1.0,
        }])
    }

    pub fn exp_reflected(c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(domain!("reflection point must be finite, got {c}"));
        }
        Ok(Self::ExpReflected { c })
    }

    pub fn atoms(&self) -> Option<&[Atom]> {
        match self {
            Self::Discrete { atoms } => Some(atoms),
            Self::ExpReflected { .. } => None,
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Self::Discrete { atoms } => crate::sum::sum(atoms.iter().map(|a| a.weight * a.location)),
            // E(c - 2X)^+ = c - 2 + 2 exp(-c/2)
            Self::ExpReflected { c } if *c > 0.0 => c - 2.0 + 2.0 * (-c / 2.0).exp(),
            Self::ExpReflected { .. } => 0.0,
        }
    }

    pub fn variance(&self) -> f64 {
        match self {
            Self::Discrete { atoms } => {
                let mean = self.mean();
                crate::sum::sum(atoms.iter().map(|a| a.weight * (a.location - mean).powi(2)))
            }
            Self::ExpReflected { c } if *c > 0.0 => {
                let mean = self.mean();
                // E((c - 2X)^+)^2 = c^2 - 4 E(c - 2X)^+
                c * c - 4.0 * mean - mean * mean
            }
            Self::ExpReflected { .. } => 0.0,
        }
    }
}

/// The limiting mixing measure for central keys: the law of
/// `(2 log n + 2 gamma + log(t (1 - t)) - 2X)^+`.
pub fn nu_exponential(n: usize, t: f64) -> Result<MixingMeasure> {
    if n == 0 {
        return Err(domain!("n must be at least 1"));
    }
    if !(t > 0.0 && t < 1.0) {
        return Err(domain!("t must lie in (0, 1), got {t}"));
    }
    let c = 2.0 * (n as f64).ln() + 2.0 * EULER_GAMMA + (t * (1.0 - t)).ln();
    MixingMeasure::exp_reflected(c)
}

/// The conditional Poisson rate `H(G) + H(N - 1 - G)` under the joint law
/// of `(G, N - 1 - G)`.
pub fn mu_discrete(n: usize, l: usize, jd: &JointGN, h: &HarmonicTable) -> Result<MixingMeasure> {
    if jd.n() != n || jd.l() != l {
        return Err(Error::Invalid(format!(
            "joint law is for (n, l) = ({}, {}), expected ({n}, {l})",
            jd.n(),
            jd.l()
        )));
    }
    if h.n_max() < n {
        return Err(Error::Invalid(format!(
            "harmonic table covers {} < n = {n}",
            h.n_max()
        )));
    }
    let atoms = jd.iter().map(|(i, j, w)| Atom {
        location: h.h(i) + h.h(j),
        weight: w,
    });
    MixingMeasure::discrete(atoms)
}

/// `MixPo(nu)(k) = int exp(-x) x^k / k! nu(dx)`, truncated with tail below
/// `tol`.
pub fn mixpo_pmf(nu: &MixingMeasure, tol: f64) -> Result<Pmf> {
    check_tol(tol)?;
    match nu {
        MixingMeasure::Discrete { atoms } => {
            let mut lo = usize::MAX;
            let mut parts = Vec::with_capacity(atoms.len());
            for a in atoms {
                let p = poisson_pmf(a.location, tol)?;
                lo = lo.min(p.offset());
                parts.push((a.weight, p));
            }
            let hi = parts.iter().map(|(_, p)| p.end()).max().unwrap_or(1);
            let lo = lo.min(hi - 1);
            let mut acc = vec![CompensatedSum::new(); hi - lo];
            let mut tail = CompensatedSum::new();
            for (w, p) in &parts {
                for (k, m) in p.iter() {
                    acc[k - lo].add(w * m);
                }
                tail.add(w * p.truncated_tail());
            }
            let masses = acc.iter().map(CompensatedSum::value).collect();
            Ok(Pmf::from_parts(lo, masses, tail.value()))
        }
        MixingMeasure::ExpReflected { c } if *c <= 0.0 => Ok(Pmf::point(0)),
        MixingMeasure::ExpReflected { c } => exp_reflected_mixpo(*c, tol),
    }
}

fn exp_reflected_mixpo(c: f64, tol: f64) -> Result<Pmf> {
    // Every rate lies in [0, c], so MixPo is stochastically below Po(c) and
    // the Po(c) truncation point and tail bound carry over.
    let envelope = poisson_pmf(c, tol)?;
    let dim = envelope.end();
    let scale = 0.5 * (-c / 2.0).exp();
    let integrand = |x: f64, out: &mut [f64]| {
        // exp(-x) x^k / k! * exp(-(c - x)/2) / 2
        let mut term = scale * (-x / 2.0).exp();
        for (k, o) in out.iter_mut().enumerate() {
            if k > 0 {
                term *= x / k as f64;
            }
            *o = term;
        }
    };
    let mut masses = integrate_vec(&integrand, 0.0, c, dim, tol);
    masses[0] += (-c / 2.0).exp();
    for m in &mut masses {
        *m = m.clamp(0.0, 1.0);
    }
    Ok(Pmf::from_parts(0, masses, envelope.truncated_tail()))
}

/// Wasserstein distance between two discrete mixing measures, via the
/// quantile coupling: both atom lists are walked in sorted order and mass is
/// matched greedily.
pub fn mixing_wasserstein(a: &MixingMeasure, b: &MixingMeasure) -> Result<f64> {
    let (Some(xs), Some(ys)) = (a.atoms(), b.atoms()) else {
        return Err(Error::Invalid(
            "quantile coupling is implemented for discrete measures only".into(),
        ));
    };
    let mut acc = CompensatedSum::new();
    let (mut i, mut j) = (0, 0);
    let (mut left_x, mut left_y) = (xs.first().map_or(0.0, |a| a.weight), ys.first().map_or(0.0, |a| a.weight));
    while i < xs.len() && j < ys.len() {
        let w = left_x.min(left_y);
        acc.add(w * (xs[i].location - ys[j].location).abs());
        left_x -= w;
        left_y -= w;
        if left_x <= 0.0 {
            i += 1;
            left_x = xs.get(i).map_or(0.0, |a| a.weight);
        }
        if left_y <= 0.0 {
            j += 1;
            left_y = ys.get(j).map_or(0.0, |a| a.weight);
        }
    }
    Ok(acc.value())
}
