use super::pmf::Pmf;
use crate::error::{domain, Result};
use crate::sum::CompensatedSum;

/// `HypGeo(population; successes, draws)`: number of successes among
/// `draws` items taken without replacement.
///
/// Weights are generated by the ratio recurrence outward from the mode and
/// normalized at the end, so no factorials are formed.
pub fn hypergeometric_pmf(population: usize, successes: usize, draws: usize) -> Result<Pmf> {
    if successes > population || draws > population {
        return Err(domain!(
            "HypGeo({population}; {successes}, {draws}) requires successes, draws <= population"
        ));
    }
    let failures = population - successes;
    let lo = draws.saturating_sub(failures);
    let hi = draws.min(successes);
    if lo == hi {
        return Ok(Pmf::point(lo));
    }
    let mode = (((draws + 1) as f64 * (successes + 1) as f64 / (population + 2) as f64).floor() as usize)
        .clamp(lo, hi);

    let mut w = vec![0.0; hi - lo + 1];
    w[mode - lo] = 1.0;
    // P(k+1)/P(k) = (M-k)(n-k) / ((k+1)(N-M-n+k+1))
    let ratio = |k: usize| -> f64 {
        ((successes - k) as f64 * (draws - k) as f64)
            / ((k + 1) as f64 * (failures + k + 1 - draws) as f64)
    };
    for k in mode..hi {
        w[k + 1 - lo] = w[k - lo] * ratio(k);
    }
    for k in (lo..mode).rev() {
        w[k - lo] = w[k + 1 - lo] / ratio(k);
    }
    let total = w.iter().copied().collect::<CompensatedSum>().value();
    for x in &mut w {
        *x /= total;
    }
    Ok(Pmf::from_parts(lo, w, 0.0))
}
