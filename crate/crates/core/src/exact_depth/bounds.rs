use serde::{Deserialize, Serialize};

use super::depth::exact_depth_pmf;
use super::joint::{check_key, for_each_joint_weight};
use super::moments::ad_mean;
use crate::distributions::{
    harmonic_table, hypergeometric_pmf, poisson_pmf, total_variation, wasserstein, BoundReport,
    Distance, DEFAULT_TAIL_TOL,
};
use crate::error::{domain, Result};
use crate::mixing::{mixpo_pmf, nu_exponential};
use crate::sum::CompensatedSum;

/// Key-independent constant in the Poisson approximation bound.
pub fn theorem3_rhs(n: usize) -> f64 {
    (28.0 + std::f64::consts::PI.powi(2)) / (n as f64).ln()
}

/// `d_TV(L(X_{n,l}), Po(E X_{n,l}))` against `(28 + pi^2) / log n`.
pub fn theorem3_margin(n: usize, l: usize) -> Result<BoundReport> {
    if n < 2 {
        return Err(domain!("the Poisson approximation bound needs n >= 2, got {n}"));
    }
    check_key(n, l)?;
    let h = harmonic_table(n);
    let exact = exact_depth_pmf(n, l)?;
    let po = poisson_pmf(ad_mean(n, l, &h)?, DEFAULT_TAIL_TOL)?;
    Ok(BoundReport::new(total_variation(&exact, &po).value, theorem3_rhs(n)))
}

/// Wasserstein distance from the exact depth law to the limiting mixed
/// Poisson law, for one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedPoissonFit {
    pub n: usize,
    pub t: f64,
    /// Key actually used: `round(n t)` clamped to `1..=n-1`.
    pub l: usize,
    pub distance: Distance,
    /// `distance.value * sqrt(log n)`.
    pub scaled: f64,
}

/// Key for relative position `t`: `round(n t)` half-up, clamped to `[1, n - 1]`.
pub fn central_key(n: usize, t: f64) -> usize {
    ((n as f64 * t + 0.5).floor() as usize).clamp(1, n.saturating_sub(1).max(1))
}

pub fn theorem6_distance(n: usize, t: f64) -> Result<MixedPoissonFit> {
    if n < 2 {
        return Err(domain!("need n >= 2, got {n}"));
    }
    let nu = nu_exponential(n, t)?;
    let l = central_key(n, t);
    let exact = exact_depth_pmf(n, l)?;
    let mixed = mixpo_pmf(&nu, DEFAULT_TAIL_TOL)?;
    let distance = wasserstein(&exact, &mixed);
    Ok(MixedPoissonFit {
        n,
        t,
        l,
        distance,
        scaled: distance.value * (n as f64).ln().sqrt(),
    })
}

/// Variance of `H(G) + H(N - 1 - G)` against 28.
///
/// The weights are streamed rather than collected into a mixing measure;
/// the mean is known in closed form, so one pass suffices.
pub fn lemma2_value(n: usize, l: usize) -> Result<BoundReport> {
    check_key(n, l)?;
    let h = harmonic_table(n);
    let mean = ad_mean(n, l, &h)?;
    let mut second = CompensatedSum::new();
    for_each_joint_weight(n, l, |i, j, w| {
        let d = h.h(i) + h.h(j) - mean;
        second.add(w * d * d);
    })?;
    Ok(BoundReport::new(second.value(), 28.0))
}

/// `E(|log(X / EX)| 1{X > 0})` for `X ~ HypGeo(population; successes, draws)`
/// against `4 N log N / (n M) + 2 sqrt(N / (n M))`.
pub fn lemma5_margin(population: usize, successes: usize, draws: usize) -> Result<BoundReport> {
    if successes > population || draws > population {
        return Err(domain!(
            "need M, n <= N, got N = {population}, M = {successes}, n = {draws}"
        ));
    }
    if successes == 0 || draws == 0 {
        return Err(domain!("need n M >= 1, got M = {successes}, n = {draws}"));
    }
    let nm = draws as f64 * successes as f64;
    let big_n = population as f64;
    let mean = nm / big_n;
    let law = hypergeometric_pmf(population, successes, draws)?;
    let lhs: CompensatedSum = law
        .iter()
        .filter(|&(k, _)| k > 0)
        .map(|(k, p)| p * (k as f64 / mean).ln().abs())
        .collect();
    let rhs = 4.0 * big_n * big_n.ln() / nm + 2.0 * (big_n / nm).sqrt();
    Ok(BoundReport::new(lhs.value(), rhs))
}
