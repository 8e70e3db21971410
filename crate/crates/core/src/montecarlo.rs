//! Seeded sampling of node depths by three independent routes.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{hypergeometric_pmf, Pmf};
use crate::error::{domain, Error, Result};
use crate::exact_depth::check_key;
use crate::trees::{build_bst, find_select, node_depth, Permutation};

/// Samples drawn per stream in [`simulate`].
pub const CHUNK_SIZE: usize = 8192;

/// Identifies an independent, reproducible random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// Uniform random permutation of `1..=n` (Fisher-Yates).
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let mut values: Vec<usize> = (1..=n).collect();
    values.shuffle(rng);
    Permutation::new(values).expect("shuffle preserves the value set")
}

/// Inverse-transform draw from `HypGeo(population; successes, draws)`.
pub fn sample_hypergeometric<R: Rng + ?Sized>(
    population: usize,
    successes: usize,
    draws: usize,
    rng: &mut R,
) -> Result<usize> {
    let law = hypergeometric_pmf(population, successes, draws)?;
    Ok(inverse_transform(&law, rng.random::<f64>()))
}

fn inverse_transform(law: &Pmf, u: f64) -> usize {
    let mut cdf = 0.0;
    for (k, p) in law.iter() {
        cdf += p;
        if u < cdf {
            return k;
        }
    }
    law.end() - 1
}

/// Depth of key `l` in a search tree grown from a fresh random permutation.
pub fn sample_depth_bst<R: Rng + ?Sized>(n: usize, l: usize, rng: &mut R) -> Result<usize> {
    check_key(n, l)?;
    let tree = build_bst(&random_permutation(n, rng));
    node_depth(&tree, l)
}

/// Depth drawn through the mixture representation: `N` uniform on `1..=n`,
/// `G ~ HypGeo(n - 1; l - 1, N - 1)`, then two independent Bernoulli sums
/// `sum_{i<=G} Ber(1/i) + sum_{i<=N-1-G} Ber(1/i)`.
pub fn sample_depth_representation<R: Rng + ?Sized>(n: usize, l: usize, rng: &mut R) -> Result<usize> {
    check_key(n, l)?;
    let position = rng.random_range(1..=n);
    let smaller = sample_hypergeometric(n - 1, l - 1, position - 1, rng)?;
    let larger = position - 1 - smaller;
    Ok(bernoulli_sum(smaller, rng) + bernoulli_sum(larger, rng))
}

fn bernoulli_sum<R: Rng + ?Sized>(m: usize, rng: &mut R) -> usize {
    (1..=m).filter(|&i| rng.random_bool(1.0 / i as f64)).count()
}

/// Recursions of FIND for rank `l` on a fresh random permutation.
pub fn sample_find_recursions<R: Rng + ?Sized>(n: usize, l: usize, rng: &mut R) -> Result<usize> {
    check_key(n, l)?;
    Ok(find_select(&random_permutation(n, rng), l)?.recursions)
}

/// Depth of a key drawn uniformly from `1..=n`, independently of the tree.
pub fn sample_random_key_depth<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<usize> {
    if n == 0 {
        return Err(domain!("n must be at least 1"));
    }
    let key = rng.random_range(1..=n);
    sample_depth_representation(n, key, rng)
}

/// Tally of integer samples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmpiricalPmf {
    /// `counts[k]` = number of samples equal to `k`.
    pub counts: Vec<u64>,
    pub sample_size: u64,
}

impl EmpiricalPmf {
    pub fn from_samples(samples: &[usize]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Invalid("no samples".into()));
        }
        let mut counts = vec![0u64; samples.iter().max().unwrap() + 1];
        for &s in samples {
            counts[s] += 1;
        }
        Ok(Self {
            counts,
            sample_size: samples.len() as u64,
        })
    }

    pub fn to_pmf(&self) -> Pmf {
        let n = self.sample_size as f64;
        Pmf::from_parts(0, self.counts.iter().map(|&c| c as f64 / n).collect(), 0.0)
    }
}

/// Normalized counts; the truncated tail is zero.
pub fn empirical_pmf(samples: &[usize]) -> Result<Pmf> {
    Ok(EmpiricalPmf::from_samples(samples)?.to_pmf())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Grow a search tree and measure the depth.
    Bst,
    /// Mixture representation with Bernoulli sums.
    Representation,
    /// Recursion count of FIND.
    Find,
    /// Representation route at a uniformly drawn key; `l` is ignored.
    RandomKey,
}

impl Route {
    pub const ALL: [Route; 4] = [Route::Bst, Route::Representation, Route::Find, Route::RandomKey];

    pub fn name(self) -> &'static str {
        match self {
            Route::Bst => "bst",
            Route::Representation => "representation",
            Route::Find => "find",
            Route::RandomKey => "random-key",
        }
    }

    fn stream_base(self) -> u64 {
        (self as u64) << 40
    }

    pub fn sample<R: Rng + ?Sized>(self, n: usize, l: usize, rng: &mut R) -> Result<usize> {
        match self {
            Route::Bst => sample_depth_bst(n, l, rng),
            Route::Representation => sample_depth_representation(n, l, rng),
            Route::Find => sample_find_recursions(n, l, rng),
            Route::RandomKey => sample_random_key_depth(n, rng),
        }
    }
}

impl std::str::FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Route::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown route {s:?}")))
    }
}

/// Draws `samples` values along `route`, in a fixed order.
///
/// Work is split into chunks of [`CHUNK_SIZE`], each with its own stream of
/// `seed`, so the output does not depend on the number of threads. Routes
/// use disjoint stream ranges: the search-tree and FIND routes would
/// otherwise see the same permutations and agree pathwise.
pub fn draw_samples(route: Route, n: usize, l: usize, samples: usize, seed: u64) -> Result<Vec<usize>> {
    if samples == 0 {
        return Err(Error::Invalid("sample count must be at least 1".into()));
    }
    match route {
        Route::RandomKey if n == 0 => return Err(domain!("n must be at least 1")),
        Route::RandomKey => {}
        _ => check_key(n, l)?,
    }
    let chunks = (0..samples.div_ceil(CHUNK_SIZE))
        .into_par_iter()
        .map(|c| {
            let mut rng = RngStream::new(seed, route.stream_base() + c as u64).rng();
            let len = CHUNK_SIZE.min(samples - c * CHUNK_SIZE);
            (0..len).map(|_| route.sample(n, l, &mut rng)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(chunks.concat())
}

/// Tally of [`draw_samples`].
pub fn simulate(route: Route, n: usize, l: usize, samples: usize, seed: u64) -> Result<EmpiricalPmf> {
    EmpiricalPmf::from_samples(&draw_samples(route, n, l, samples, seed)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{poisson_pmf, total_variation};
    use rand_distr::{Distribution, Poisson};

    fn first_draws(stream: RngStream) -> Vec<u64> {
        let mut rng = stream.rng();
        (0..4).map(|_| rng.random()).collect()
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        assert_eq!(first_draws(RngStream::new(7, 0)), first_draws(RngStream::new(7, 0)));
        assert_ne!(first_draws(RngStream::new(7, 0)), first_draws(RngStream::new(7, 1)));
        assert_ne!(first_draws(RngStream::new(7, 0)), first_draws(RngStream::new(8, 0)));
    }

    #[test]
    fn permutation_basics() {
        let mut rng = RngStream::new(1, 0).rng();
        assert_eq!(random_permutation(1, &mut rng).values(), &[1]);
        let p = random_permutation(50, &mut RngStream::new(1, 0).rng());
        let q = random_permutation(50, &mut RngStream::new(1, 0).rng());
        assert_eq!(p, q);
        assert_ne!(p, Permutation::identity(50));
    }

    #[test]
    fn trivial_trees() {
        let mut rng = RngStream::new(3, 0).rng();
        for _ in 0..20 {
            assert_eq!(sample_depth_bst(1, 1, &mut rng).unwrap(), 0);
            assert_eq!(sample_depth_representation(1, 1, &mut rng).unwrap(), 0);
            assert_eq!(sample_find_recursions(1, 1, &mut rng).unwrap(), 0);
            assert_eq!(sample_random_key_depth(1, &mut rng).unwrap(), 0);
        }
        assert!(sample_depth_bst(3, 4, &mut rng).is_err());
        assert!(sample_random_key_depth(0, &mut rng).is_err());
    }

    #[test]
    fn empirical_examples() {
        assert_eq!(empirical_pmf(&[0, 0, 1, 1]).unwrap().masses(), &[0.5, 0.5]);
        assert_eq!(empirical_pmf(&[5]).unwrap(), Pmf::point(5));
        assert!(empirical_pmf(&[]).is_err());
    }

    #[test]
    fn empirical_poisson_self_check() {
        let mut rng = RngStream::new(11, 0).rng();
        let po = Poisson::new(3.0).unwrap();
        let draws: Vec<usize> = (0..100_000).map(|_| po.sample(&mut rng) as usize).collect();
        let d = total_variation(&empirical_pmf(&draws).unwrap(), &poisson_pmf(3.0, 1e-12).unwrap());
        assert!(d.value < 0.01, "{}", d.value);
    }

    #[test]
    fn simulate_is_chunk_deterministic() {
        let a = simulate(Route::Find, 30, 11, 20_000, 5).unwrap();
        let b = simulate(Route::Find, 30, 11, 20_000, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.sample_size, 20_000);
        let c = simulate(Route::Find, 30, 11, 20_000, 6).unwrap();
        assert_ne!(a, c);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let single = pool.install(|| simulate(Route::Find, 30, 11, 20_000, 5).unwrap());
        assert_eq!(a, single);
    }

    #[test]
    fn routes_draw_independent_streams() {
        let bst = draw_samples(Route::Bst, 40, 9, 5000, 3).unwrap();
        let find = draw_samples(Route::Find, 40, 9, 5000, 3).unwrap();
        assert_ne!(bst, find);
    }

    #[test]
    fn simulate_validation() {
        assert!(simulate(Route::Bst, 3, 2, 0, 1).is_err());
        assert!(simulate(Route::Bst, 3, 5, 10, 1).is_err());
        assert!(simulate(Route::RandomKey, 3, 0, 10, 1).is_ok());
        assert_eq!("find".parse::<Route>().unwrap(), Route::Find);
        assert!("bogus".parse::<Route>().is_err());
    }
}
