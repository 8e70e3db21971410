//! Acceptance criteria. Runs as a plain binary so every criterion prints one
//! PASS/FAIL line; exits nonzero if any criterion fails.

use std::time::Instant;

use depthlab::distributions::{harmonic_table, ks_to_standard_normal, mean_var, total_variation};
use depthlab::exact_depth::{
    brute_force_depth_pmf, exact_depth_pmf, exact_move_joint_pmf, kp_variance, theorem3_margin,
    theorem3_rhs,
};
use depthlab::montecarlo::simulate;
use depthlab::verify::{run_suite, theorem3_keys, CheckRow, Suite, VerifyOptions, THEOREM3_GRID};
use depthlab::Route;
use serde::Deserialize;

const SEED: u64 = 20_240_917;

/// Criteria that cannot pass as stated. Criterion 12 asks for
/// KS((X - 2 log n)/sqrt(2 log n), N(0,1)) < 0.05 at n = 1e4 for a random
/// key, but E X = 2 log n + 2 gamma - 4 + o(1): the centering is off by about
/// 0.66 standard deviations at that n, which alone forces KS near 0.3.
const KNOWN_FAILURES: &[usize] = &[12];

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn opts() -> VerifyOptions {
    VerifyOptions {
        seed: SEED,
        ..Default::default()
    }
}

fn suite(s: Suite, o: &VerifyOptions) -> Vec<CheckRow> {
    run_suite(s, o).unwrap_or_else(|e| panic!("{} failed to run: {e}", s.name()))
}

fn failing(rows: &[CheckRow]) -> Vec<String> {
    rows.iter()
        .filter(|r| !r.report.holds)
        .map(|r| format!("[{}] lhs={:.3e} rhs={:.3e}", r.case, r.report.lhs, r.report.rhs))
        .collect()
}

fn max_lhs(rows: &[CheckRow]) -> f64 {
    rows.iter().map(|r| r.report.lhs).fold(0.0, f64::max)
}

fn oracle_equivalence() -> Verdict {
    let mut worst = 0.0f64;
    for n in 1..=8 {
        for l in 1..=n {
            let d = total_variation(&exact_depth_pmf(n, l).unwrap(), &brute_force_depth_pmf(n, l).unwrap());
            worst = worst.max(d.value);
        }
    }
    verdict(worst < 1e-12, format!("max d_TV over n <= 8, all l = {worst:.2e} (< 1e-12)"))
}

fn mean_identity() -> Verdict {
    let rows = suite(
        Suite::Moments,
        &VerifyOptions {
            n_max: Some(500),
            ..opts()
        },
    );
    let mean: Vec<_> = rows.into_iter().filter(|r| r.case.starts_with("mean")).collect();
    let worst = max_lhs(&mean);
    verdict(
        mean.len() == 500 && worst < 1e-9,
        format!("{} sizes, 20-point key grid: max |mean - AD| = {worst:.2e} (< 1e-9)", mean.len()),
    )
}

fn variance_identity() -> Verdict {
    let rows = suite(
        Suite::Moments,
        &VerifyOptions {
            n_max: Some(500),
            ..opts()
        },
    );
    let var: Vec<_> = rows.into_iter().filter(|r| r.case.starts_with("variance")).collect();
    let bad = var.iter().filter(|r| r.report.lhs >= r.report.rhs).count();
    let h = harmonic_table(4);
    let spot32 = (kp_variance(3, 2, &h).unwrap() - 2.0 / 3.0).abs();
    let spot42 = (kp_variance(4, 2, &h).unwrap() - 35.0 / 36.0).abs();
    let law42 = (mean_var(&exact_depth_pmf(4, 2).unwrap()).1 - 35.0 / 36.0).abs();
    verdict(
        var.len() == 500 && bad == 0 && spot32 < 1e-12 && spot42 < 1e-12 && law42 < 1e-12,
        format!(
            "{bad} grid points over 1e-8 relative; |KP(3,2) - 2/3| = {spot32:.1e}, |KP(4,2) - 35/36| = {spot42:.1e}"
        ),
    )
}

#[derive(Deserialize)]
struct Baseline {
    n: usize,
    l: usize,
    lhs: f64,
}

fn theorem3() -> Verdict {
    let baseline: Vec<Baseline> =
        serde_json::from_str(include_str!("data/theorem3_lhs.json")).expect("baseline parses");
    let mut cases = 0;
    let mut violations = Vec::new();
    let mut drift = 0.0f64;
    let mut worst_ratio = 0.0f64;
    for n in THEOREM3_GRID {
        for l in theorem3_keys(n) {
            let r = theorem3_margin(n, l).unwrap();
            cases += 1;
            if r.lhs > theorem3_rhs(n) || r.lhs.is_nan() {
                violations.push(format!("n={n} l={l}"));
            }
            worst_ratio = worst_ratio.max(r.lhs / r.rhs);
            let b = baseline.iter().find(|b| b.n == n && b.l == l).expect("baseline entry");
            drift = drift.max((r.lhs - b.lhs).abs());
        }
    }
    verdict(
        violations.is_empty() && drift < 1e-10,
        format!(
            "{cases} grid points, violations {violations:?}, max lhs/rhs = {worst_ratio:.4}, max drift from baseline = {drift:.1e}"
        ),
    )
}

fn theorem6() -> Verdict {
    let rows = suite(Suite::Theorem6, &opts());
    let scaled: Vec<String> = rows.iter().map(|r| format!("{:.4}", r.report.lhs)).collect();
    let trend = rows.last().map(|r| r.report.lhs / rows[0].report.lhs).unwrap_or(f64::NAN);
    verdict(
        rows.len() == 5 && failing(&rows).is_empty(),
        format!("d_W sqrt(log n) at n = 64..16384: [{}]; last/first = {trend:.4} (<= 1.1)", scaled.join(", ")),
    )
}

fn lemma2() -> Verdict {
    let rows = suite(
        Suite::Lemma2,
        &VerifyOptions {
            n_max: Some(300),
            ..opts()
        },
    );
    let (worst, at) = rows
        .iter()
        .map(|r| (r.report.lhs, r.case.as_str()))
        .fold((0.0, ""), |a, b| if b.0 > a.0 { b } else { a });
    verdict(
        rows.len() == 300 && failing(&rows).is_empty(),
        format!("max variance of the mixing measure over n <= 300 = {worst:.4} ({at}) (<= 28)"),
    )
}

fn lemma5() -> Verdict {
    let rows = suite(
        Suite::Lemma5,
        &VerifyOptions {
            n_max: Some(80),
            ..opts()
        },
    );
    let tight = rows.iter().map(|r| r.report.margin).fold(f64::INFINITY, f64::min);
    verdict(
        rows.len() == 80 && failing(&rows).is_empty(),
        format!("N <= 80, all (M, n): failures {:?}, smallest margin = {tight:.3e}", failing(&rows)),
    )
}

fn lemma4b() -> Verdict {
    let rows = suite(
        Suite::Lemma4b,
        &VerifyOptions {
            trials: Some(1000),
            ..opts()
        },
    );
    let r = &rows[0].report;
    verdict(
        failing(&rows).is_empty(),
        format!(
            "1000 random pairs; smallest margin {:.3e} (d_W(MixPo) = {:.6} vs d_W(mixing) + 1e-8 = {:.6})",
            r.margin, r.lhs, r.rhs
        ),
    )
}

fn dtv_dw() -> Verdict {
    let rows = suite(
        Suite::DtvDw,
        &VerifyOptions {
            trials: Some(1000),
            ..opts()
        },
    );
    let r = &rows[0].report;
    verdict(
        failing(&rows).is_empty(),
        format!("{}: d_TV = {:.4} vs 2 d_W = {:.4}", rows[0].case, r.lhs, r.rhs),
    )
}

fn find() -> Verdict {
    let rows = suite(
        Suite::Find,
        &VerifyOptions {
            n_max: Some(7),
            trials: Some(100_000),
            ..opts()
        },
    );
    let laws = rows.iter().filter(|r| r.case.starts_with("law")).count();
    let random = rows.last().expect("random pathwise row");
    verdict(
        laws == 28 && failing(&rows).is_empty(),
        format!(
            "{laws} exhaustive laws (n <= 7) equal; {} pathwise failures in 100000 random cases",
            random.report.lhs
        ),
    )
}

fn moves() -> Verdict {
    let rows = suite(Suite::Moves, &opts());
    let mv = exact_move_joint_pmf(3, 2).unwrap();
    let joint = mv.mass(0, 0);
    let product = mv.right_marginal().mass(0) * mv.left_marginal().mass(0);
    verdict(
        failing(&rows).is_empty(),
        format!(
            "marginal max error = {:.1e}; P(0,0) = {joint:.6} vs product {product:.6}",
            max_lhs(&rows[..rows.len() - 2])
        ),
    )
}

fn normality() -> Verdict {
    let rows = suite(
        Suite::Normality,
        &VerifyOptions {
            samples: Some(100_000),
            ..opts()
        },
    );
    let (random, exact) = rows.split_last().expect("normality rows");
    let ks = |key: &str| {
        let mut values: Vec<String> = exact
            .iter()
            .filter(|r| r.case.starts_with(key) && r.case.contains("<= KS"))
            .map(|r| format!("{:.4}", r.report.rhs))
            .collect();
        if let Some(last) = exact.iter().rev().find(|r| r.case.starts_with(key)) {
            values.push(format!("{:.4}", last.report.lhs));
        }
        values.join(" > ")
    };
    // Diagnostic only: the same draws standardized by their own mean and sd.
    let draws = simulate(Route::RandomKey, 10_000, 1, 100_000, SEED).unwrap().to_pmf();
    let (m, v) = mean_var(&draws);
    let studentized = ks_to_standard_normal(&draws, m, v.sqrt()).unwrap();
    verdict(
        failing(&rows).is_empty(),
        format!(
            "exact law KS along n = 1e2, 1e3, 1e4: l=1 [{}], l=ceil(n/2) [{}] (decreasing, < 0.1: {}); \
             random key, (X - 2 log n)/sqrt(2 log n): KS = {:.4} (< 0.05: {}); \
             same draws standardized by sample mean {m:.3} and sd {:.3}: KS = {studentized:.4}",
            ks("l=1"),
            ks("l=ceil"),
            failing(exact).is_empty(),
            random.report.lhs,
            random.report.holds,
            v.sqrt(),
        ),
    )
}

fn samplers() -> Verdict {
    let rows = suite(
        Suite::Samplers,
        &VerifyOptions {
            samples: Some(100_000),
            ..opts()
        },
    );
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let pooled = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let thread_independent = [Route::Bst, Route::Representation, Route::Find].into_iter().all(|route| {
        let a = single.install(|| simulate(route, 100, 37, 20_000, SEED).unwrap());
        let b = pooled.install(|| simulate(route, 100, 37, 20_000, SEED).unwrap());
        a == b
    });
    let tvs: Vec<String> = rows
        .iter()
        .filter(|r| r.case.contains("d_TV"))
        .map(|r| format!("{}", r.report.lhs))
        .collect();
    verdict(
        failing(&rows).is_empty() && thread_independent,
        format!(
            "d_TV to exact (bst, representation, find) = [{}] (< 0.01); reruns identical; 1 vs 4 threads identical: {thread_independent}",
            tvs.join(", ")
        ),
    )
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("oracle equivalence", oracle_equivalence),
        ("mean identity", mean_identity),
        ("variance identity", variance_identity),
        ("Poisson bound", theorem3),
        ("mixed Poisson trend", theorem6),
        ("mixing variance <= 28", lemma2),
        ("hypergeometric bound", lemma5),
        ("MixPo contraction", lemma4b),
        ("d_TV <= 2 d_W", dtv_dw),
        ("FIND equivalence", find),
        ("move counts", moves),
        ("normality", normality),
        ("sampler cross-validation", samplers),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        if !v.pass {
            failed.push(i + 1);
        }
        println!(
            "{} criterion {:>2} ({name}, {:.1}s): {}",
            if v.pass { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64(),
            v.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed.len(), criteria.len());
    if failed == KNOWN_FAILURES {
        println!(
            "acceptance: criteria {KNOWN_FAILURES:?} fail as documented in the README (random-key centering); \
             no other criterion failed"
        );
    } else {
        if !KNOWN_FAILURES.iter().all(|k| failed.contains(k)) {
            println!("acceptance: a documented failure now passes; update KNOWN_FAILURES and the README");
        }
        std::process::exit(1);
    }
}
