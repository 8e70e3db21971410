use serde::{Deserialize, Serialize};
use libm::erfc;

use super::pmf::Pmf;
use crate::error::{domain, Result};
use crate::sum::CompensatedSum;

/// A distance evaluated on truncated laws, with a bound on how far the
/// untruncated value can lie from `value`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Distance {
    pub value: f64,
    pub error_bound: f64,
}

/// `d_TV(p, q) = 1/2 sum_k |p(k) - q(k)|`.
///
/// The error bound is half the sum of the two truncated tails.
pub fn total_variation(p: &Pmf, q: &Pmf) -> Distance {
    let lo = p.offset().min(q.offset());
    let hi = p.end().max(q.end());
    let acc: CompensatedSum = (lo..hi).map(|k| (p.mass(k) - q.mass(k)).abs()).collect();
    Distance {
        value: 0.5 * acc.value(),
        error_bound: 0.5 * (p.truncated_tail() + q.truncated_tail()),
    }
}

/// `d_W(p, q) = sum_{k >= 1} |P(X >= k) - P(Y >= k)|` for laws on the
/// nonnegative integers.
///
/// Survival functions are accumulated from the top of the stored windows.
/// The error bound charges each unit of dropped mass with a displacement of
/// one past the largest stored support point.
pub fn wasserstein(p: &Pmf, q: &Pmf) -> Distance {
    let hi = p.end().max(q.end());
    let mut surv_p = 0.0;
    let mut surv_q = 0.0;
    let mut acc = CompensatedSum::new();
    for k in (1..hi).rev() {
        surv_p += p.mass(k);
        surv_q += q.mass(k);
        acc.add((surv_p - surv_q).abs());
    }
    Distance {
        value: acc.value(),
        error_bound: (p.truncated_tail() + q.truncated_tail()) * (hi + 1) as f64,
    }
}

/// Standard normal distribution function.
pub fn standard_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Kolmogorov-Smirnov distance between the law of `(X - shift) / scale`,
/// `X ~ p`, and the standard normal.
///
/// The empirical side is a step function, so the supremum is attained at a
/// jump point, approached from the left or taken at the jump.
pub fn ks_to_standard_normal(p: &Pmf, shift: f64, scale: f64) -> Result<f64> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(domain!("scale must be positive, got {scale}"));
    }
    let mut cdf = CompensatedSum::new();
    let mut sup: f64 = 0.0;
    for (k, m) in p.iter() {
        if m == 0.0 {
            continue;
        }
        let phi = standard_normal_cdf((k as f64 - shift) / scale);
        let before = cdf.value();
        cdf.add(m);
        sup = sup.max((before - phi).abs()).max((cdf.value() - phi).abs());
    }
    Ok(sup)
}
