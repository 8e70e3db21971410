use crate::distributions::hypergeometric_pmf;
use crate::error::{domain, Result};

pub(crate) fn check_key(n: usize, l: usize) -> Result<()> {
    if n == 0 || l == 0 || l > n {
        return Err(domain!("need 1 <= l <= n, got n = {n}, l = {l}"));
    }
    Ok(())
}

/// Joint law of `(G, N - 1 - G)`, where `N` is the insertion position of key
/// `l` and `G` the number of smaller keys inserted before it:
///
/// `P(G = i, N - 1 - G = j) = C(i + j, i) C(n - 1 - i - j, l - 1 - i) / (n C(n - 1, l - 1))`
/// for `0 <= i < l`, `0 <= j <= n - l`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointGN {
    n: usize,
    l: usize,
    /// Row-major, `l` rows of `n - l + 1` columns.
    weights: Vec<f64>,
}

impl JointGN {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn rows(&self) -> usize {
        self.l
    }

    pub fn cols(&self) -> usize {
        self.n - self.l + 1
    }

    /// `P(G = i, N - 1 - G = j)`; zero outside the grid.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i < self.rows() && j < self.cols() {
            self.weights[i * self.cols() + j]
        } else {
            0.0
        }
    }

    /// `(i, j, weight)` over the whole grid, row by row.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let cols = self.cols();
        self.weights
            .iter()
            .enumerate()
            .map(move |(idx, &w)| (idx / cols, idx % cols, w))
    }

    /// Marginal law of `G` (should be uniform on `0..l`).
    pub fn row_sums(&self) -> Vec<f64> {
        self.weights
            .chunks(self.cols())
            .map(|row| crate::sum::sum(row.iter().copied()))
            .collect()
    }

    /// Marginal law of `N - 1 - G` (should be uniform on `0..=n-l`).
    pub fn col_sums(&self) -> Vec<f64> {
        (0..self.cols())
            .map(|j| crate::sum::sum((0..self.rows()).map(|i| self.get(i, j))))
            .collect()
    }
}

/// Streams the joint weights anti-diagonal by anti-diagonal without storing
/// the grid.
///
/// Given `N - 1 = m`, `G ~ HypGeo(n - 1; l - 1, m)`, and `N` is uniform on
/// `1..=n`. Each diagonal is a normalized hypergeometric pmf, so no large
/// binomial coefficients are formed.
pub(crate) fn for_each_joint_weight(n: usize, l: usize, mut f: impl FnMut(usize, usize, f64)) -> Result<()> {
    check_key(n, l)?;
    let inv_n = 1.0 / n as f64;
    for m in 0..n {
        let g = hypergeometric_pmf(n - 1, l - 1, m)?;
        for (i, p) in g.iter() {
            if p > 0.0 {
                f(i, m - i, p * inv_n);
            }
        }
    }
    Ok(())
}

pub fn joint_gn(n: usize, l: usize) -> Result<JointGN> {
    check_key(n, l)?;
    let cols = n - l + 1;
    let mut weights = vec![0.0; l * cols];
    for_each_joint_weight(n, l, |i, j, w| weights[i * cols + j] = w)?;
    Ok(JointGN { n, l, weights })
}
