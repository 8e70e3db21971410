use super::joint::check_key;
use crate::distributions::HarmonicTable;
use crate::error::{Error, Result};

fn check_table(n: usize, h: &HarmonicTable) -> Result<()> {
    if h.n_max() < n {
        return Err(Error::Invalid(format!(
            "harmonic table covers {} < n = {n}",
            h.n_max()
        )));
    }
    Ok(())
}

/// `E X_{n,l} = H_l + H_{n+1-l} - 2`.
pub fn ad_mean(n: usize, l: usize, h: &HarmonicTable) -> Result<f64> {
    check_key(n, l)?;
    check_table(n, h)?;
    Ok(h.h(l) + h.h(n + 1 - l) - 2.0)
}

/// Closed-form variance of `X_{n,l}`:
///
/// ```text
/// a = 2(n+1) / (l(n+1-l))
/// var = a H_n + (1 - a)(H_l + H_{n+1-l}) - H2_l - H2_{n+1-l} + 2/(l(n+1-l)) + 2
/// ```
pub fn kp_variance(n: usize, l: usize, h: &HarmonicTable) -> Result<f64> {
    check_key(n, l)?;
    check_table(n, h)?;
    let r = n + 1 - l;
    let prod = l as f64 * r as f64;
    let a = 2.0 * (n + 1) as f64 / prod;
    Ok(a * h.h(n) + (1.0 - a) * (h.h(l) + h.h(r)) - h.h2(l) - h.h2(r) + 2.0 / prod + 2.0)
}
