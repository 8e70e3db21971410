use serde::{Deserialize, Serialize};

use super::Permutation;
use crate::error::{domain, Result};

/// Splits the values inserted before key `l` into those below and above it
/// and counts their records.
///
/// The smaller keys on the search path are exactly the ascending records of
/// `pi_minus`; the larger ones are the descending records of `pi_plus`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordDecomposition {
    /// 1-based position `N` of `l` in the permutation.
    pub position_n: usize,
    /// Positions `i < N` holding values below `l`.
    pub s_minus: Vec<usize>,
    /// Positions `i < N` holding values above `l`.
    pub s_plus: Vec<usize>,
    pub pi_minus: Vec<usize>,
    pub pi_plus: Vec<usize>,
    /// Ascending records of `pi_minus` (moves to the right).
    pub r_minus: usize,
    /// Descending records of `pi_plus` (moves to the left).
    pub r_plus: usize,
}

impl RecordDecomposition {
    pub fn depth(&self) -> usize {
        self.r_minus + self.r_plus
    }
}

fn count_records(values: &[usize], better: impl Fn(usize, usize) -> bool) -> usize {
    let mut best: Option<usize> = None;
    let mut records = 0;
    for &v in values {
        if best.is_none_or(|b| better(v, b)) {
            best = Some(v);
            records += 1;
        }
    }
    records
}

pub fn record_decomposition(perm: &Permutation, l: usize) -> Result<RecordDecomposition> {
    let n = perm.len();
    if l == 0 || l > n {
        return Err(domain!("need 1 <= l <= n, got n = {n}, l = {l}"));
    }
    let position_n = perm.position_of(l).expect("permutation contains every key");
    let mut d = RecordDecomposition {
        position_n,
        s_minus: Vec::new(),
        s_plus: Vec::new(),
        pi_minus: Vec::new(),
        pi_plus: Vec::new(),
        r_minus: 0,
        r_plus: 0,
    };
    for (i, &v) in perm.values()[..position_n - 1].iter().enumerate() {
        if v < l {
            d.s_minus.push(i + 1);
            d.pi_minus.push(v);
        } else {
            d.s_plus.push(i + 1);
            d.pi_plus.push(v);
        }
    }
    d.r_minus = count_records(&d.pi_minus, |v, best| v > best);
    d.r_plus = count_records(&d.pi_plus, |v, best| v < best);
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example() {
        let p: Permutation = "2 4 1 3".parse().unwrap();
        let d = record_decomposition(&p, 3).unwrap();
        assert_eq!(d.position_n, 4);
        assert_eq!(d.s_minus, vec![1, 3]);
        assert_eq!(d.s_plus, vec![2]);
        assert_eq!(d.pi_minus, vec![2, 1]);
        assert_eq!(d.pi_plus, vec![4]);
        assert_eq!((d.r_minus, d.r_plus), (1, 1));
        assert_eq!(d.depth(), 2);
    }

    #[test]
    fn root_and_chain() {
        let p: Permutation = "3 1 2".parse().unwrap();
        let d = record_decomposition(&p, 3).unwrap();
        assert_eq!(d.position_n, 1);
        assert!(d.pi_minus.is_empty() && d.pi_plus.is_empty());
        assert_eq!(d.depth(), 0);

        let d = record_decomposition(&Permutation::identity(6), 6).unwrap();
        assert_eq!((d.r_minus, d.r_plus), (5, 0));
        assert!(record_decomposition(&Permutation::identity(6), 7).is_err());
    }
}
