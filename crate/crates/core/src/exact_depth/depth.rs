use serde::{Deserialize, Serialize};

use super::joint::{check_key, for_each_joint_weight};
use crate::distributions::{record_count_table, Pmf};
use crate::error::{Error, Result};

/// Default upper limit on `n` for the exact computations.
pub const DEFAULT_N_CAP: usize = 32_768;

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::Resource {
            what: "n",
            requested: n,
            cap,
        });
    }
    Ok(())
}

/// `M_j = sum_i P(G = i, N - 1 - G = j) R_i` on a common window, together
/// with the record laws it was built from.
struct ColumnMixture {
    records: Vec<Pmf>,
    /// Row `j` holds the (sub-probability) masses of `M_j` on `0..width`.
    columns: Vec<f64>,
    width: usize,
    tail: f64,
}

impl ColumnMixture {
    fn build(n: usize, l: usize) -> Result<Self> {
        let records = record_count_table((l - 1).max(n - l));
        let width = records[..l].iter().map(Pmf::end).max().unwrap_or(1);
        let cols = n - l + 1;
        let mut columns = vec![0.0; cols * width];
        let mut tail = 0.0;
        for_each_joint_weight(n, l, |i, j, w| {
            let r = &records[i];
            let row = &mut columns[j * width..(j + 1) * width];
            for (k, m) in r.iter() {
                row[k] += w * m;
            }
            tail += w * (r.truncated_tail() + records[j].truncated_tail());
        })?;
        Ok(Self {
            records,
            columns,
            width,
            tail,
        })
    }

    fn column(&self, j: usize) -> &[f64] {
        &self.columns[j * self.width..(j + 1) * self.width]
    }

    fn cols(&self) -> usize {
        self.columns.len() / self.width
    }
}

/// Exact law of the depth `X_{n,l}` of key `l` in a random binary search
/// tree on `n` keys, with the default cap on `n`.
pub fn exact_depth_pmf(n: usize, l: usize) -> Result<Pmf> {
    exact_depth_pmf_capped(n, l, DEFAULT_N_CAP)
}

/// Exact depth law: the `(G, N - 1 - G)` mixture of `R_G * R_{N-1-G}`,
/// where `R_m` is the record-count law of a random permutation of length `m`.
///
/// The inner sum over `G` is folded into one column mixture per value of
/// `N - 1 - G` before convolving, so each record law is convolved only once
/// per column.
pub fn exact_depth_pmf_capped(n: usize, l: usize, cap: usize) -> Result<Pmf> {
    check_key(n, l)?;
    check_cap(n, cap)?;
    let mix = ColumnMixture::build(n, l)?;
    let right_width = mix.records[..mix.cols()].iter().map(Pmf::end).max().unwrap_or(1);
    let mut out = vec![0.0; mix.width + right_width];
    for j in 0..mix.cols() {
        let left = mix.column(j);
        for (s, b) in mix.records[j].iter() {
            for (r, &a) in left.iter().enumerate() {
                out[r + s] += a * b;
            }
        }
    }
    for m in &mut out {
        *m = m.min(1.0);
    }
    Ok(Pmf::from_parts(0, out, mix.tail))
}

/// Joint law of (moves to the right, moves to the left) on the path from the
/// root to key `l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveJointPmf {
    pub n: usize,
    pub l: usize,
    /// `grid[r][s] = P(right moves = r, left moves = s)`.
    pub grid: Vec<Vec<f64>>,
    pub truncated_tail: f64,
}

impl MoveJointPmf {
    pub fn mass(&self, r: usize, s: usize) -> f64 {
        self.grid.get(r).and_then(|row| row.get(s)).copied().unwrap_or(0.0)
    }

    /// Law of the number of moves to the right.
    pub fn right_marginal(&self) -> Pmf {
        let masses = self.grid.iter().map(|row| crate::sum::sum(row.iter().copied())).collect();
        Pmf::from_parts(0, masses, self.truncated_tail)
    }

    /// Law of the number of moves to the left.
    pub fn left_marginal(&self) -> Pmf {
        let cols = self.grid.first().map_or(0, Vec::len);
        let masses = (0..cols)
            .map(|s| crate::sum::sum(self.grid.iter().map(|row| row[s])))
            .collect();
        Pmf::from_parts(0, masses, self.truncated_tail)
    }

    /// Law of the total `r + s`, i.e. the depth.
    pub fn total(&self) -> Pmf {
        let cols = self.grid.first().map_or(0, Vec::len);
        let mut out = vec![0.0; self.grid.len() + cols];
        for (r, row) in self.grid.iter().enumerate() {
            for (s, &p) in row.iter().enumerate() {
                out[r + s] += p;
            }
        }
        Pmf::from_parts(0, out, self.truncated_tail)
    }
}

pub fn exact_move_joint_pmf(n: usize, l: usize) -> Result<MoveJointPmf> {
    exact_move_joint_pmf_capped(n, l, DEFAULT_N_CAP)
}

/// Given `(G, N - 1 - G) = (i, j)` the right and left move counts are
/// independent with laws `R_i` and `R_j`, so the joint law is
/// `sum_j M_j (x) R_j` with `M_j` the column mixture.
pub fn exact_move_joint_pmf_capped(n: usize, l: usize, cap: usize) -> Result<MoveJointPmf> {
    check_key(n, l)?;
    check_cap(n, cap)?;
    let mix = ColumnMixture::build(n, l)?;
    let right_width = mix.records[..mix.cols()].iter().map(Pmf::end).max().unwrap_or(1);
    let mut grid = vec![vec![0.0; right_width]; mix.width];
    for j in 0..mix.cols() {
        let left = mix.column(j);
        for (s, b) in mix.records[j].iter() {
            for (r, &a) in left.iter().enumerate() {
                grid[r][s] += a * b;
            }
        }
    }
    Ok(MoveJointPmf {
        n,
        l,
        grid,
        truncated_tail: mix.tail,
    })
}
