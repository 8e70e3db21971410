use std::fs;
use std::io::{BufWriter, Write};

use depthlab::distributions::{
    harmonic_table, mean_var, poisson_pmf, total_variation, wasserstein, BoundReport, Distance,
    Pmf, DEFAULT_TAIL_TOL,
};
use depthlab::exact_depth::{ad_mean, central_key, exact_depth_pmf_capped, theorem3_rhs};
use depthlab::mixing::{mixpo_pmf, nu_exponential};
use depthlab::montecarlo::{draw_samples, random_permutation};
use depthlab::trees::depth_plot as plot;
use depthlab::verify::{run_all, run_suite, VerifyOptions};
use depthlab::{EmpiricalPmf, Permutation, Route, RngStream};
use serde_json::json;

use crate::output::{float, CliError, Document, Metadata, Outcome, Status};
use crate::{ApproxArgs, DepthPlotArgs, ExactArgs, SimulateArgs, SuiteSelection, VerifyArgs};

/// Largest n for which `simulate --route random-key` averages the exact laws
/// of all keys to compare against.
const RANDOM_KEY_EXACT_MAX: usize = 1000;

const TIDY: &[&str] = &["quantity", "k", "value"];

fn pmf_rows(rows: &mut Vec<Vec<String>>, name: &str, p: &Pmf) {
    rows.extend(p.iter().map(|(k, m)| vec![name.to_string(), k.to_string(), float(m)]));
    rows.push(vec![format!("{name}_truncated_tail"), String::new(), float(p.truncated_tail())]);
}

fn scalar(rows: &mut Vec<Vec<String>>, name: &str, x: f64) {
    rows.push(vec![name.to_string(), String::new(), float(x)]);
}

fn distance(rows: &mut Vec<Vec<String>>, name: &str, d: Distance) {
    scalar(rows, name, d.value);
    scalar(rows, &format!("{name}_error_bound"), d.error_bound);
}

fn ok(json: serde_json::Value, header: &'static [&'static str], rows: Vec<Vec<String>>) -> Outcome {
    Outcome {
        doc: Document { json, header, rows },
        status: Status::Ok,
    }
}

pub fn exact(a: &ExactArgs) -> Result<Outcome, CliError> {
    let pmf = exact_depth_pmf_capped(a.n, a.l, a.n_cap)?;
    let (mean, variance) = mean_var(&pmf);
    let mut rows = Vec::new();
    pmf_rows(&mut rows, "mass", &pmf);
    scalar(&mut rows, "mean", mean);
    scalar(&mut rows, "variance", variance);
    let json = json!({
        "metadata": Metadata::new("exact", Some(a.n), Some(a.l)),
        "pmf": pmf,
        "mean": mean,
        "variance": variance,
    });
    Ok(ok(json, TIDY, rows))
}

pub fn approx(a: &ApproxArgs) -> Result<Outcome, CliError> {
    match (a.l, a.t) {
        (Some(l), None) => approx_poisson(a.n, l, a.n_cap),
        (None, Some(t)) => approx_mixed(a.n, t, a.n_cap),
        _ => Err(CliError::Usage("give exactly one of --l and --t".into())),
    }
}

fn approx_poisson(n: usize, l: usize, cap: usize) -> Result<Outcome, CliError> {
    let exact = exact_depth_pmf_capped(n, l, cap)?;
    let lambda = ad_mean(n, l, &harmonic_table(n))?;
    let po = poisson_pmf(lambda, DEFAULT_TAIL_TOL)?;
    let tv = total_variation(&exact, &po);
    let w = wasserstein(&exact, &po);
    let bound = (n >= 2).then(|| BoundReport::new(tv.value, theorem3_rhs(n)));

    let mut rows = Vec::new();
    pmf_rows(&mut rows, "exact", &exact);
    pmf_rows(&mut rows, "poisson", &po);
    scalar(&mut rows, "lambda", lambda);
    distance(&mut rows, "total_variation", tv);
    distance(&mut rows, "wasserstein", w);
    if let Some(b) = bound {
        scalar(&mut rows, "bound", b.rhs);
        scalar(&mut rows, "bound_margin", b.margin);
    }
    let json = json!({
        "metadata": Metadata::new("approx", Some(n), Some(l)),
        "model": "poisson",
        "lambda": lambda,
        "exact": exact,
        "approximation": po,
        "total_variation": tv,
        "wasserstein": w,
        "bound": bound,
    });
    let status = match bound {
        Some(b) if !b.holds => {
            eprintln!("depthlab: d_TV {} exceeds the bound {}", b.lhs, b.rhs);
            Status::BoundViolated
        }
        _ => Status::Ok,
    };
    Ok(Outcome {
        status,
        ..ok(json, TIDY, rows)
    })
}

fn approx_mixed(n: usize, t: f64, cap: usize) -> Result<Outcome, CliError> {
    if n < 2 {
        return Err(depthlab::Error::Domain(format!("the mixed Poisson report needs n >= 2, got {n}")).into());
    }
    let nu = nu_exponential(n, t)?;
    let l = central_key(n, t);
    let exact = exact_depth_pmf_capped(n, l, cap)?;
    let mixed = mixpo_pmf(&nu, DEFAULT_TAIL_TOL)?;
    let w = wasserstein(&exact, &mixed);
    let tv = total_variation(&exact, &mixed);
    let scaled = w.value * (n as f64).ln().sqrt();

    let mut rows = Vec::new();
    pmf_rows(&mut rows, "exact", &exact);
    pmf_rows(&mut rows, "mixed_poisson", &mixed);
    scalar(&mut rows, "t", t);
    scalar(&mut rows, "mixing_mean", nu.mean());
    distance(&mut rows, "wasserstein", w);
    scalar(&mut rows, "wasserstein_scaled", scaled);
    distance(&mut rows, "total_variation", tv);
    let json = json!({
        "metadata": Metadata::new("approx", Some(n), Some(l)),
        "model": "mixed-poisson",
        "t": t,
        "mixing": nu,
        "exact": exact,
        "approximation": mixed,
        "wasserstein": w,
        "wasserstein_scaled": scaled,
        "total_variation": tv,
    });
    Ok(ok(json, TIDY, rows))
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let opts = VerifyOptions {
        n: a.n,
        n_max: a.n_max,
        trials: a.trials,
        samples: a.samples,
        seed: a.seed,
    };
    let (name, checks) = match a.suite {
        SuiteSelection::One(s) => (s.name(), run_suite(s, &opts)?),
        SuiteSelection::All => ("all", run_all(&opts)?),
    };
    let failed: Vec<_> = checks.iter().filter(|c| !c.report.holds).collect();
    for c in &failed {
        eprintln!(
            "depthlab: FAILED {} [{}]: lhs {} > rhs {}",
            c.suite, c.case, c.report.lhs, c.report.rhs
        );
    }
    let status = if failed.is_empty() { Status::Ok } else { Status::BoundViolated };
    let rows = checks
        .iter()
        .map(|c| {
            vec![
                c.suite.clone(),
                c.case.clone(),
                float(c.report.lhs),
                float(c.report.rhs),
                c.report.holds.to_string(),
                float(c.report.margin),
            ]
        })
        .collect();
    let json = json!({
        "metadata": Metadata::new("verify", a.n, None),
        "suite": name,
        "checks": checks,
        "summary": {"total": checks.len(), "failed": failed.len()},
    });
    Ok(Outcome {
        status,
        ..ok(json, &["suite", "case", "lhs", "rhs", "holds", "margin"], rows)
    })
}

fn random_key_exact(n: usize) -> Result<Pmf, CliError> {
    let mut masses = Vec::new();
    let mut tail = 0.0;
    for l in 1..=n {
        let p = exact_depth_pmf_capped(n, l, n)?;
        if masses.len() < p.end() {
            masses.resize(p.end(), 0.0);
        }
        for (k, m) in p.iter() {
            masses[k] += m / n as f64;
        }
        tail += p.truncated_tail() / n as f64;
    }
    Ok(Pmf::new(0, masses, tail)?)
}

pub fn simulate(a: &SimulateArgs) -> Result<Outcome, CliError> {
    let l = match (a.route, a.l) {
        (Route::RandomKey, _) => None,
        (_, Some(l)) => Some(l),
        (_, None) => return Err(CliError::Usage(format!("--l is required for route {}", a.route.name()))),
    };
    let samples = usize::try_from(a.samples).map_err(|_| CliError::Usage("sample count too large".into()))?;
    let draws = draw_samples(a.route, a.n, l.unwrap_or(1), samples, a.seed)?;
    if let Some(path) = &a.samples_out {
        let mut w = BufWriter::new(fs::File::create(path)?);
        for x in &draws {
            writeln!(w, "{x}")?;
        }
        w.flush()?;
    }
    let emp = EmpiricalPmf::from_samples(&draws)?;
    let freq = emp.to_pmf();
    let exact = match l {
        Some(l) if a.n <= a.n_cap => Some(exact_depth_pmf_capped(a.n, l, a.n_cap)?),
        None if a.n <= RANDOM_KEY_EXACT_MAX.min(a.n_cap) => Some(random_key_exact(a.n)?),
        _ => None,
    };
    let tv = exact.as_ref().map(|e| total_variation(&freq, e));
    let (mean, variance) = mean_var(&freq);

    let mut rows: Vec<Vec<String>> = emp
        .counts
        .iter()
        .enumerate()
        .map(|(k, c)| vec!["count".to_string(), k.to_string(), c.to_string()])
        .collect();
    rows.extend(freq.iter().map(|(k, m)| vec!["frequency".to_string(), k.to_string(), float(m)]));
    scalar(&mut rows, "mean", mean);
    scalar(&mut rows, "variance", variance);
    if let Some(d) = tv {
        distance(&mut rows, "total_variation", d);
    }
    let json = json!({
        "metadata": Metadata::new("simulate", Some(a.n), l),
        "route": a.route,
        "seed": a.seed,
        "samples": samples,
        "counts": emp.counts,
        "pmf": freq,
        "mean": mean,
        "variance": variance,
        "total_variation": tv,
    });
    Ok(ok(json, TIDY, rows))
}

pub fn depth_plot(a: &DepthPlotArgs) -> Result<Outcome, CliError> {
    let perm = match (&a.perm_file, a.n) {
        (Some(path), _) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            text.parse::<Permutation>()?
        }
        (None, Some(n)) => random_permutation(n, &mut RngStream::new(a.seed, 0).rng()),
        (None, None) => return Err(CliError::Usage("give --perm-file or --n".into())),
    };
    if perm.is_empty() {
        return Err(CliError::Usage("the permutation is empty".into()));
    }
    let depths = plot(&perm);
    let rows = depths
        .iter()
        .enumerate()
        .map(|(i, d)| vec![(i + 1).to_string(), d.to_string()])
        .collect();
    let points: Vec<_> = depths
        .iter()
        .enumerate()
        .map(|(i, d)| json!({"l": i + 1, "depth": d}))
        .collect();
    let json = json!({
        "metadata": Metadata::new("depth-plot", Some(perm.len()), None),
        "permutation": perm,
        "rows": points,
    });
    Ok(ok(json, &["l", "depth"], rows))
}
