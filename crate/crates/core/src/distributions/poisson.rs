use libm::lgamma as ln_gamma;

use super::pmf::{Pmf, MAX_TRUNCATED_TAIL};
use crate::error::{domain, Result};

/// Above this rate `exp(-lambda)` underflows and the pmf is seeded at the
/// mode in log space instead.
const DIRECT_START_LIMIT: f64 = 600.0;

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol <= MAX_TRUNCATED_TAIL) {
        return Err(domain!("tail tolerance {tol} must lie in (0, {MAX_TRUNCATED_TAIL}]"));
    }
    Ok(())
}

/// `Po(lambda)` truncated so that the dropped mass is below `tol`.
///
/// `Po(0)` is the point mass at zero. The truncated tail is a geometric
/// upper bound on the mass that was not stored.
pub fn poisson_pmf(lambda: f64, tol: f64) -> Result<Pmf> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(domain!("Poisson rate must be finite and nonnegative, got {lambda}"));
    }
    check_tol(tol)?;
    if lambda == 0.0 {
        return Ok(Pmf::point(0));
    }

    let (start, seed) = if lambda <= DIRECT_START_LIMIT {
        (0usize, (-lambda).exp())
    } else {
        let mode = lambda.floor();
        let log_p = -lambda + mode * lambda.ln() - ln_gamma(mode + 1.0);
        (mode as usize, log_p.exp())
    };

    // Walk down from the seed (only when seeded at the mode).
    let mut lower = Vec::new();
    let mut lower_tail = 0.0;
    if start > 0 {
        let mut p = seed;
        let mut k = start;
        loop {
            // P(k-1) = P(k) * k / lambda
            p *= k as f64 / lambda;
            k -= 1;
            lower.push(p);
            let ratio = k as f64 / lambda;
            let bound = if k == 0 { 0.0 } else { p * ratio / (1.0 - ratio) };
            if k == 0 || bound < tol / 2.0 {
                lower_tail = bound;
                break;
            }
        }
        lower.reverse();
    }
    let offset = start - lower.len();

    let mut masses = lower;
    let mut p = seed;
    let mut k = start;
    masses.push(p);
    let upper_tail = loop {
        let next_ratio = lambda / (k + 1) as f64;
        if next_ratio < 1.0 {
            let bound = p * next_ratio / (1.0 - next_ratio);
            if bound < tol / 2.0 {
                break bound;
            }
        }
        p *= next_ratio;
        k += 1;
        masses.push(p);
    };

    Ok(Pmf::from_parts(offset, masses, lower_tail + upper_tail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{mean_var, DEFAULT_TAIL_TOL};

    #[test]
    fn zero_rate_is_point_mass() {
        assert_eq!(poisson_pmf(0.0, 1e-12).unwrap(), Pmf::point(0));
    }

    #[test]
    fn known_masses() {
        let p = poisson_pmf(std::f64::consts::LN_2, 1e-12).unwrap();
        assert!((p.mass(0) - 0.5).abs() < 1e-15);
        let p = poisson_pmf(1.0, 1e-12).unwrap();
        assert!((p.mass(1) - (-1.0f64).exp()).abs() < 1e-16);
        assert!((p.mass(1) - 0.367879).abs() < 1e-6);
    }

    #[test]
    fn domain_errors() {
        assert!(poisson_pmf(-1.0, 1e-12).is_err());
        assert!(poisson_pmf(f64::NAN, 1e-12).is_err());
        assert!(poisson_pmf(1.0, 0.0).is_err());
        assert!(poisson_pmf(1.0, 1e-3).is_err());
    }

    #[test]
    fn tail_below_tolerance_and_normalized() {
        for lambda in [0.01, 0.5, 3.0, 20.0, 250.0, 599.0, 601.0, 5000.0] {
            let p = poisson_pmf(lambda, DEFAULT_TAIL_TOL).unwrap();
            assert!(p.truncated_tail() < DEFAULT_TAIL_TOL, "lambda={lambda}");
            let total = p.total_mass() + p.truncated_tail();
            assert!((total - 1.0).abs() < 1e-10, "lambda={lambda} total={total}");
            let (m, v) = mean_var(&p);
            assert!((m - lambda).abs() < 1e-8 * lambda.max(1.0), "lambda={lambda}");
            assert!((v - lambda).abs() < 1e-7 * lambda.max(1.0), "lambda={lambda}");
        }
    }

    #[test]
    fn mode_seed_agrees_with_direct_seed() {
        // Both starting strategies around the switch point.
        let a = poisson_pmf(DIRECT_START_LIMIT, 1e-12).unwrap();
        let b = poisson_pmf(DIRECT_START_LIMIT + 1e-9, 1e-12).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-11);
    }
}
