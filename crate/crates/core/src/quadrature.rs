//! Adaptive Gauss-Legendre quadrature for vector-valued integrands.

use std::sync::OnceLock;

const ORDER: usize = 20;
const MAX_DEPTH: u32 = 48;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// found by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Three-term recurrence for P_n(x) and P_{n-1}(x).
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(ORDER))
}

/// Integrates a vector-valued function over `[a, b]`.
///
/// `f(x, out)` writes `dim` values into `out`. Intervals are bisected until
/// the one-panel and two-panel estimates agree within `tol / 10` in every
/// component; each half inherits half of the parent tolerance.
pub fn integrate_vec<F>(f: &F, a: f64, b: f64, dim: usize, tol: f64) -> Vec<f64>
where
    F: Fn(f64, &mut [f64]),
{
    let mut scratch = vec![0.0; dim];
    let whole = panel(f, a, b, &mut scratch);
    let mut out = vec![0.0; dim];
    refine(f, a, b, whole, tol, 0, &mut scratch, &mut out);
    out
}

fn panel<F: Fn(f64, &mut [f64])>(f: &F, a: f64, b: f64, scratch: &mut [f64]) -> Vec<f64> {
    let (nodes, weights) = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = vec![0.0; scratch.len()];
    for (x, w) in nodes.iter().zip(weights) {
        f(mid + half * x, scratch);
        for (s, v) in acc.iter_mut().zip(scratch.iter()) {
            *s += w * half * v;
        }
    }
    acc
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64, &mut [f64])>(
    f: &F,
    a: f64,
    b: f64,
    whole: Vec<f64>,
    tol: f64,
    depth: u32,
    scratch: &mut [f64],
    out: &mut [f64],
) {
    let m = 0.5 * (a + b);
    let left = panel(f, a, m, scratch);
    let right = panel(f, m, b, scratch);
    let converged = whole
        .iter()
        .zip(left.iter().zip(&right))
        .all(|(w, (l, r))| (w - (l + r)).abs() < tol / 10.0);
    if converged || depth >= MAX_DEPTH {
        for (o, (l, r)) in out.iter_mut().zip(left.iter().zip(&right)) {
            *o += l + r;
        }
        return;
    }
    refine(f, a, m, left, tol / 2.0, depth + 1, scratch, out);
    refine(f, m, b, right, tol / 2.0, depth + 1, scratch, out);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(5);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // Exact through degree 9: int_{-1}^{1} x^8 = 2/9.
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((s - 2.0 / 9.0).abs() < 1e-14);
        let (x20, _) = gauss_legendre(20);
        assert!(x20.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn adaptive_integration() {
        let v = integrate_vec(
            &|x: f64, out: &mut [f64]| {
                out[0] = x.exp();
                out[1] = (10.0 * x).sin();
                out[2] = x.sqrt();
            },
            0.0,
            2.0,
            3,
            1e-13,
        );
        assert!((v[0] - (2f64.exp() - 1.0)).abs() < 1e-13);
        assert!((v[1] - (1.0 - 20f64.cos()) / 10.0).abs() < 1e-13);
        // sqrt has an endpoint singularity in its derivative; bisection copes.
        assert!((v[2] - 2.0 / 3.0 * 2f64.powf(1.5)).abs() < 1e-12);
    }
}
