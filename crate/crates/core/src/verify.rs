//! Verification sweeps: each suite evaluates a family of inequalities and
//! reports one [`CheckRow`] per check.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{
    harmonic_table, ks_to_standard_normal, poisson_pmf, record_count_pmf, total_variation,
    wasserstein, BoundReport, Pmf, DEFAULT_TAIL_TOL,
};
use crate::error::{domain, Error, Result};
use crate::exact_depth::{
    ad_mean, brute_force_depth_counts, brute_force_depth_pmf, exact_depth_pmf,
    exact_move_joint_pmf, for_each_permutation, kp_variance, lemma2_value, lemma5_margin,
    theorem3_margin, theorem6_distance,
};
use crate::mixing::{mixing_wasserstein, mixpo_pmf, Atom, MixingMeasure};
use crate::montecarlo::{random_permutation, simulate, Route, RngStream};
use crate::trees::{build_bst, find_select, node_depth, record_decomposition, Permutation};

/// One evaluated inequality `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub suite: String,
    pub case: String,
    #[serde(flatten)]
    pub report: BoundReport,
}

impl CheckRow {
    fn new(suite: Suite, case: impl Into<String>, report: BoundReport) -> Self {
        Self {
            suite: suite.name().to_string(),
            case: case.into(),
            report,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Exact law against brute-force enumeration.
    Oracle,
    /// Mean and variance against their closed forms.
    Moments,
    /// Record counts against Poisson; harmonic-sum estimate.
    Records,
    /// Poisson approximation in total variation.
    Theorem3,
    /// Mixed Poisson approximation in Wasserstein distance.
    Theorem6,
    Lemma2,
    Lemma4b,
    Lemma5,
    /// `d_TV <= 2 d_W` on random pmf pairs.
    DtvDw,
    /// FIND recursions against search-tree depths.
    Find,
    /// Left/right move counts.
    Moves,
    /// Kolmogorov-Smirnov distance to the normal limit.
    Normality,
    /// Sampling routes against the exact law.
    Samplers,
}

impl Suite {
    pub const ALL: [Suite; 13] = [
        Suite::Oracle,
        Suite::Moments,
        Suite::Records,
        Suite::Theorem3,
        Suite::Theorem6,
        Suite::Lemma2,
        Suite::Lemma4b,
        Suite::Lemma5,
        Suite::DtvDw,
        Suite::Find,
        Suite::Moves,
        Suite::Normality,
        Suite::Samplers,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Moments => "moments",
            Suite::Records => "records",
            Suite::Theorem3 => "theorem3",
            Suite::Theorem6 => "theorem6",
            Suite::Lemma2 => "lemma2",
            Suite::Lemma4b => "lemma4b",
            Suite::Lemma5 => "lemma5",
            Suite::DtvDw => "dtv-dw",
            Suite::Find => "find",
            Suite::Moves => "moves",
            Suite::Normality => "normality",
            Suite::Samplers => "samplers",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown suite {s:?}")))
    }
}

/// Knobs shared by the suites. `None` selects the suite's default.
#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    /// Restrict size-gridded suites to this single `n`.
    pub n: Option<usize>,
    /// Upper end of swept ranges of `n`.
    pub n_max: Option<usize>,
    /// Random cases for the randomized suites.
    pub trials: Option<usize>,
    /// Samples per route for simulation suites.
    pub samples: Option<usize>,
    pub seed: u64,
}

pub const THEOREM3_GRID: [usize; 9] = [2, 3, 5, 10, 30, 100, 300, 1000, 3000];
pub const THEOREM6_GRID: [usize; 5] = [64, 256, 1024, 4096, 16384];
pub const NORMALITY_GRID: [usize; 3] = [100, 1000, 10_000];

/// Every sweep over `n` uses a 20-point key grid (fewer when `n < 20`).
pub fn key_grid(n: usize, points: usize) -> Vec<usize> {
    if n <= points {
        return (1..=n).collect();
    }
    let mut keys: Vec<usize> = (0..points)
        .map(|i| 1 + ((n - 1) as f64 * i as f64 / (points - 1) as f64).round() as usize)
        .collect();
    keys.dedup();
    keys
}

/// The four keys `1, ceil(n/4), ceil(n/2), n` without repeats.
pub fn theorem3_keys(n: usize) -> Vec<usize> {
    let mut keys = vec![1, n.div_ceil(4), n.div_ceil(2), n];
    keys.dedup();
    keys
}

fn sizes(opts: &VerifyOptions, default_max: usize, min: usize) -> Result<Vec<usize>> {
    if let Some(n) = opts.n {
        if n < min {
            return Err(domain!("this suite needs n >= {min}, got {n}"));
        }
        return Ok(vec![n]);
    }
    Ok((min..=opts.n_max.unwrap_or(default_max)).collect())
}

fn grid_sizes(opts: &VerifyOptions, grid: &[usize], min: usize) -> Result<Vec<usize>> {
    if let Some(n) = opts.n {
        if n < min {
            return Err(domain!("this suite needs n >= {min}, got {n}"));
        }
        return Ok(vec![n]);
    }
    let cap = opts.n_max.unwrap_or(usize::MAX);
    Ok(grid.iter().copied().filter(|&n| n <= cap).collect())
}

/// The row with the smallest margin, relabelled with the sweep size.
fn worst(suite: Suite, rows: Vec<(String, BoundReport)>, label: &str) -> Option<CheckRow> {
    let count = rows.len();
    rows.into_iter()
        .min_by(|a, b| a.1.margin.total_cmp(&b.1.margin))
        .map(|(case, r)| CheckRow::new(suite, format!("{label}: worst of {count} at {case}"), r))
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<Vec<CheckRow>> {
    match suite {
        Suite::Oracle => oracle(opts),
        Suite::Moments => moments(opts),
        Suite::Records => records(opts),
        Suite::Theorem3 => theorem3(opts),
        Suite::Theorem6 => theorem6(opts),
        Suite::Lemma2 => lemma2(opts),
        Suite::Lemma4b => lemma4b(opts),
        Suite::Lemma5 => lemma5(opts),
        Suite::DtvDw => dtv_dw(opts),
        Suite::Find => find(opts),
        Suite::Moves => moves(opts),
        Suite::Normality => normality(opts),
        Suite::Samplers => samplers(opts),
    }
}

pub fn run_all(opts: &VerifyOptions) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for suite in Suite::ALL {
        rows.extend(run_suite(suite, opts)?);
    }
    Ok(rows)
}

fn oracle(opts: &VerifyOptions) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for n in sizes(opts, 8, 1)? {
        for l in 1..=n {
            let d = total_variation(&exact_depth_pmf(n, l)?, &brute_force_depth_pmf(n, l)?);
            rows.push(CheckRow::new(
                Suite::Oracle,
                format!("n={n} l={l}"),
                BoundReport::new(d.value, 1e-12),
            ));
        }
    }
    Ok(rows)
}

fn moments(opts: &VerifyOptions) -> Result<Vec<CheckRow>> {
    let ns = sizes(opts, 500, 1)?;
    let h = harmonic_table(ns.iter().copied().max().unwrap_or(1));
    let per_n = ns
        .par_iter()
        .map(|&n| -> Result<Vec<CheckRow>> {
            let mut mean_rows = Vec::new();
            let mut var_rows = Vec::new();
            for l in key_grid(n, 20) {
                let (mean, var) = crate::distributions::mean_var(&exact_depth_pmf(n, l)?);
                let m = ad_mean(n, l, &h)?;
                let v = kp_variance(n, l, &h)?;
                mean_rows.push((format!("l={l}"), BoundReport::new((mean - m).abs(), 1e-9)));
                var_rows.push((
                    format!("l={l}"),
                    BoundReport::new((var - v).abs(), 1e-8 * v.max(1.0)),
                ));
            }
            Ok(worst(Suite::Moments, mean_rows, &format!("mean n={n}"))
                .into_iter()
                .chain(worst(Suite::Moments, var_rows, &format!("variance n={n}")))
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_n.into_iter().flatten().collect())
}

fn records(opts: &VerifyOptions) -> Result<Vec<CheckRow>> {
    let m_max = opts.n_max.unwrap_or(500);
    let h = harmonic_table(m_max.max(100_000));
    let barbour = (1..=m_max)
        .into_par_iter()
        .map(|m| -> Result<(String, BoundReport)> {
            let d = total_variation(&record_count_pmf(m), &poisson_pmf(h.h(m), DEFAULT_TAIL_TOL)?);
            Ok((format!("m={m}"), BoundReport::new(d.value, h.h2(m) / h.h(m))))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sum = crate::sum::CompensatedSum::new();
    let mut harmonic = Vec::new();
    for n in 2..=100_000usize {
        sum.add(1.0 / h.h(n - 1));
        harmonic.push((
            format!("n={n}"),
            BoundReport::new(sum.value(), 3.0 * n as f64 / (n as f64).ln()),
        ));
    }
    Ok(worst(Suite::Records, barbour, &format!("d_TV(R_m, Po(H_m)) <= H2_m/H_m, m <= {m_max}"))
        .into_iter()
        .chain(worst(Suite::Records, harmonic, "sum 1/H_m <= 3n/log n, n <= 100000"))
        .collect())
}

fn theorem3(opts: &VerifyOptions) -> Result<Vec<CheckRow>> {
    let cases: Vec<(usize, usize)> = grid_sizes(opts, &THEOREM3_GRID, 2)?
        .into_iter()
        .flat_map(|n| theorem3_keys(n).into_iter().map(move |l| (n, l)))
        .collect();
    cases
        .par_iter()
        .map(|&(n, l)| Ok(CheckRow::new(Suite::Theorem3, format!("n={n} l={l}"), theorem3_margin(n, l)?)))
        .collect()
}

fn theorem6(opts: &VerifyOptions) -> Result<Vec<CheckRow>> {
    let ns = grid_sizes(opts, &THEOREM6_GRID, 2)?;
    let fits = ns
        .iter()
        .map(|&n| theorem6_distance(n, 0.5))
        .collect::<Result<Vec<_>>>()?;
    let Some(first) = fits.first() else {
        return Ok(Vec::new());
    };
    let limit = 1.1 * first.scaled;
    Ok(fits
        .iter()
        .map(|f| {
            CheckRow::new(
                Suite::Theorem6,
                format!("n={} l={} d_W={:.6} (scaled vs 1.1 x n={})", f.n, f.l, f.distance.value, first.n),
                BoundReport::new(f.scaled, limit),
            )
        })
        .collect())
}

fn lemma2(opts: &VerifyOptions) -> Result<Vec<CheckRow>> {
    sizes(opts, 300, 1)?
        .par_iter()
        .map(|&n| {
            let rows = (1..=n)
                .map(|l| Ok((format!("l={l}"), lemma2_value(n, l)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(worst(Suite::Lemma2, rows, &format!("n={n}")).expect("n >= 1"))
        })
        .collect()
}

fn random_measure<R: Rng>(rng: &mut R) -> MixingMeasure {
    let k = rng.random_range(1..=6);
    let raw: Vec<(f64, f64)> = (0..k)
        .map(|_| (rng.random_range(0.0..30.0), rng.random_range(0.01..1.0)))
        .collect();
    let total: f64 = raw.iter().map(|(_, w)| w).sum();
    MixingMeasure::discrete(raw.into_iter().map(|(location, w)| Atom {
        location,
        weight: w / total,
    }))
    .expect("valid random measure")
}

/// Random pmf on a window inside `0..25`.
pub fn random_pmf<R: Rng>(rng: &mut R) -> Pmf {
    let offset = rng.random_range(0..10);
    let len = rng.random_range(1..=15);
    let weights: Vec<f64> = (0..len).map(|_| rng.random_range(0.0..1.0)).collect();
    Pmf::from_weights(offset, &weights).unwrap_or_else(|_| Pmf::point(offset))
}

fn lemma4b(opts: &VerifyOptions) -> Result<Vec<CheckRow>> {
    let trials = opts.trials.unwrap_or(1000);
    let mut rng = RngStream::new(opts.seed, 0x4b).rng();
    let pairs: Vec<_> = (0..trials)
        .map(|_| (random_measure(&mut rng), random_measure(&mut rng)))
        .collect();
    let rows = pairs
        .par_iter()
        .enumerate()
        .map(|(i, (a, b))| -> Result<(String, BoundReport)> {
            let lhs = wasserstein(&mixpo_pmf(a, DEFAULT_TAIL_TOL)?, &mixpo_pmf(b, DEFAULT_TAIL_TOL)?);
            let rhs = mixing_wasserstein(a, b)?;
            Ok((format!("trial {i}"), BoundReport::new(lhs.value, rhs + 1e-8)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(worst(Suite::Lemma4b, rows, "d_W(MixPo) <= d_W(mixing)").into_iter().collect())
}

fn lemma5(opts: &VerifyOptions) -> Result<Vec<CheckRow>> {
    sizes(opts, 80, 1)?
        .par_iter()
        .map(|&big_n| {
            let mut rows = Vec::new();
            for m in 1..=big_n {
                for n in 1..=big_n {
                    rows.push((format!("M={m} n={n}"), lemma5_margin(big_n, m, n)?));
                }
            }
            Ok(worst(Suite::Lemma5, rows, &format!("N={big_n}")).expect("N >= 1"))
        })
        .collect()
}

fn dtv_dw(opts: &VerifyOptions) -> Result<Vec<CheckRow>> {
    let trials = opts.trials.unwrap_or(1000);
    let mut rng = RngStream::new(opts.seed, 0xd7).rng();
    let rows: Vec<_> = (0..trials)
        .map(|i| {
            let (p, q) = (random_pmf(&mut rng), random_pmf(&mut rng));
            let tv = total_variation(&p, &q).value;
            let w = wasserstein(&p, &q).value;
            (i, BoundReport::new(tv, 2.0 * w))
        })
        .collect();
    let failures = rows.iter().filter(|(_, r)| !r.holds).count();
    // Report the failing trial if any, else the one closest to equality.
    let ratio = |r: &BoundReport| if r.rhs > 0.0 { r.lhs / r.rhs } else { 0.0 };
    let pick = rows
        .iter()
        .find(|(_, r)| !r.holds)
        .or_else(|| rows.iter().max_by(|a, b| ratio(&a.1).total_cmp(&ratio(&b.1))));
    Ok(pick
        .map(|(i, r)| {
            CheckRow::new(
                Suite::DtvDw,
                format!("d_TV <= 2 d_W: {failures} of {trials} fail; largest ratio at trial {i}"),
                *r,
            )
        })
        .into_iter()
        .collect())
}

fn find(opts: &VerifyOptions) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for n in sizes(opts, 7, 1)? {
        let mut recursion_counts = vec![vec![0u64; n]; n];
        let mut pathwise_failures = 0u64;
        for_each_permutation(n, |values| {
            let perm = Permutation::new(values.to_vec()).expect("enumerated permutation");
            let tree = build_bst(&perm);
            for l in 1..=n {
                let r = find_select(&perm, l).expect("valid rank").recursions;
                recursion_counts[l - 1][r] += 1;
                let depth = node_depth(&tree, l).expect("key present");
                let split = record_decomposition(&perm, l).expect("valid key").depth();
                if r != depth || split != depth {
                    pathwise_failures += 1;
                }
            }
        });
        for l in 1..=n {
            let brute = brute_force_depth_counts(n, l)?;
            let diff = brute
                .iter()
                .zip(&recursion_counts[l - 1])
                .map(|(a, b)| a.abs_diff(*b))
                .max()
                .unwrap_or(0);
            rows.push(CheckRow::new(
                Suite::Find,
                format!("law n={n} l={l} (max count difference)"),
                BoundReport::new(diff as f64, 0.0),
            ));
        }
        rows.push(CheckRow::new(
            Suite::Find,
            format!("pathwise n={n}, all permutations and keys (failures)"),
            BoundReport::new(pathwise_failures as f64, 0.0),
        ));
    }

    let trials = opts.trials.map_or(100_000, |t| t.max(1));
    let failures: u64 = (0..trials.div_ceil(4096))
        .into_par_iter()
        .map(|c| {
            let mut rng = RngStream::new(opts.seed, 0xf1d0 + c as u64).rng();
            let len = 4096.min(trials - c * 4096);
            (0..len)
                .filter(|_| {
                    let n = rng.random_range(1..=500);
                    let l = rng.random_range(1..=n);
                    let perm = random_permutation(n, &mut rng);
                    let depth = node_depth(&build_bst(&perm), l).expect("key present");
                    let split = record_decomposition(&perm, l).expect("valid key").depth();
                    let r = find_select(&perm, l).expect("valid rank").recursions;
                    depth != split || depth != r
                })
                .count() as u64
        })
        .sum();
    rows.push(CheckRow::new(
        Suite::Find,
        format!("pathwise, {trials} random (n <= 500, l) cases (failures)"),
        BoundReport::new(failures as f64, 0.0),
    ));
    Ok(rows)
}

fn moves(opts: &VerifyOptions) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    let n_max = opts.n_max.unwrap_or(60);
    for n in [2usize, 3, 5, 10, 25, 60, 200].into_iter().filter(|&n| n <= n_max.max(3)) {
        for l in theorem3_keys(n) {
            let mv = exact_move_joint_pmf(n, l)?;
            let right = record_count_pmf(l).shifted_down(1)?;
            let left = record_count_pmf(n + 1 - l).shifted_down(1)?;
            let depth = exact_depth_pmf(n, l)?;
            let diff = mv
                .right_marginal()
                .max_abs_diff(&right)
                .max(mv.left_marginal().max_abs_diff(&left))
                .max(mv.total().max_abs_diff(&depth));
            rows.push(CheckRow::new(
                Suite::Moves,
                format!("n={n} l={l} marginals and sum (max abs diff)"),
                BoundReport::new(diff, 1e-12),
            ));
        }
    }
    let mv = exact_move_joint_pmf(3, 2)?;
    let product = mv.right_marginal().mass(0) * mv.left_marginal().mass(0);
    rows.push(CheckRow::new(
        Suite::Moves,
        "n=3 l=2 |P(0,0) - 1/3|",
        BoundReport::new((mv.mass(0, 0) - 1.0 / 3.0).abs(), 1e-12),
    ));
    rows.push(CheckRow::new(
        Suite::Moves,
        "n=3 l=2 |P(right=0) P(left=0) - 1/4|",
        BoundReport::new((product - 0.25).abs(), 1e-12),
    ));
    Ok(rows)
}

fn normality(opts: &VerifyOptions) -> Result<Vec<CheckRow>> {
    let ns = grid_sizes(opts, &NORMALITY_GRID, 1)?;
    let h = harmonic_table(ns.iter().copied().max().unwrap_or(1));
    let mut rows = Vec::new();
    for key in ["1", "ceil(n/2)"] {
        let ks = ns
            .iter()
            .map(|&n| {
                let l = if key == "1" { 1 } else { n.div_ceil(2) };
                let m = ad_mean(n, l, &h)?;
                ks_to_standard_normal(&exact_depth_pmf(n, l)?, m, m.sqrt())
            })
            .collect::<Result<Vec<_>>>()?;
        for (w, pair) in ns.windows(2).zip(ks.windows(2)) {
            rows.push(CheckRow::new(
                Suite::Normality,
                format!("l={key}: KS(n={}) <= KS(n={})", w[1], w[0]),
                BoundReport::new(pair[1], pair[0]),
            ));
        }
        if let (Some(&n), Some(&last)) = (ns.last(), ks.last()) {
            rows.push(CheckRow::new(
                Suite::Normality,
                format!("l={key}: KS(n={n}) < 0.1"),
                BoundReport::new(last, 0.1),
            ));
        }
    }
    let n = *ns.last().unwrap_or(&10_000);
    let samples = opts.samples.unwrap_or(100_000);
    let emp = simulate(Route::RandomKey, n, 1, samples, opts.seed)?.to_pmf();
    let centre = 2.0 * (n as f64).ln();
    rows.push(CheckRow::new(
        Suite::Normality,
        format!("random key n={n}, {samples} samples: KS of (X - 2 log n)/sqrt(2 log n)"),
        BoundReport::new(ks_to_standard_normal(&emp, centre, centre.sqrt())?, 0.05),
    ));
    Ok(rows)
}

fn samplers(opts: &VerifyOptions) -> Result<Vec<CheckRow>> {
    let samples = opts.samples.unwrap_or(100_000);
    let (n, l) = (100, 37);
    let exact = exact_depth_pmf(n, l)?;
    let mut rows = Vec::new();
    for route in [Route::Bst, Route::Representation, Route::Find] {
        let emp = simulate(route, n, l, samples, opts.seed)?;
        let again = simulate(route, n, l, samples, opts.seed)?;
        rows.push(CheckRow::new(
            Suite::Samplers,
            format!("{} n={n} l={l}, {samples} samples: d_TV to exact", route.name()),
            BoundReport::new(total_variation(&emp.to_pmf(), &exact).value, 0.01),
        ));
        rows.push(CheckRow::new(
            Suite::Samplers,
            format!("{} rerun with the same seed (differing counts)", route.name()),
            BoundReport::new(
                emp.counts.iter().zip(&again.counts).filter(|(a, b)| a != b).count() as f64,
                0.0,
            ),
        ));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> VerifyOptions {
        VerifyOptions {
            seed: 1,
            ..Default::default()
        }
    }

    #[test]
    fn grids() {
        assert_eq!(key_grid(3, 20), vec![1, 2, 3]);
        let g = key_grid(500, 20);
        assert_eq!(g.len(), 20);
        assert_eq!((g[0], g[19]), (1, 500));
        assert_eq!(theorem3_keys(2), vec![1, 2]);
        assert_eq!(theorem3_keys(3), vec![1, 2, 3]);
        assert_eq!(theorem3_keys(100), vec![1, 25, 50, 100]);
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_sweeps_hold() {
        let o = VerifyOptions {
            n_max: Some(6),
            trials: Some(50),
            ..opts()
        };
        for suite in [Suite::Oracle, Suite::Lemma2, Suite::Lemma5, Suite::DtvDw, Suite::Lemma4b] {
            let rows = run_suite(suite, &o).unwrap();
            assert!(!rows.is_empty());
            assert!(rows.iter().all(|r| r.report.holds), "{suite:?}: {rows:?}");
        }
    }

    #[test]
    fn theorem3_rejects_n_one() {
        let o = VerifyOptions { n: Some(1), ..opts() };
        assert!(matches!(run_suite(Suite::Theorem3, &o), Err(Error::Domain(_))));
    }
}
