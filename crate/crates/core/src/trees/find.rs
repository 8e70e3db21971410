use serde::{Deserialize, Serialize};

use super::Permutation;
use crate::error::{domain, Result};

/// Record of one run of Hoare's FIND with the head of the list as pivot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FindTrace {
    pub selected_value: usize,
    /// Partitioning rounds after the first one.
    pub recursions: usize,
    pub comparisons: usize,
    pub pivot_sequence: Vec<usize>,
}

/// Selects the `l`-th smallest value of `perm`.
///
/// Lists are partitioned stably around their first element; the search
/// continues in the part that must contain the target and stops once the
/// pivot has exactly `l - 1` smaller elements in the current list.
pub fn find_select(perm: &Permutation, l: usize) -> Result<FindTrace> {
    let n = perm.len();
    if l == 0 || l > n {
        return Err(domain!("need 1 <= l <= n, got n = {n}, l = {l}"));
    }
    let mut list = perm.values().to_vec();
    let mut rank = l;
    let mut comparisons = 0;
    let mut pivots = Vec::new();
    loop {
        let pivot = list[0];
        pivots.push(pivot);
        comparisons += list.len() - 1;
        let (smaller, larger): (Vec<usize>, Vec<usize>) =
            list[1..].iter().partition(|&&v| v < pivot);
        let k = smaller.len();
        if k == rank - 1 {
            return Ok(FindTrace {
                selected_value: pivot,
                recursions: pivots.len() - 1,
                comparisons,
                pivot_sequence: pivots,
            });
        }
        if k >= rank {
            list = smaller;
        } else {
            rank -= k + 1;
            list = larger;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_element() {
        let t = find_select(&Permutation::identity(1), 1).unwrap();
        assert_eq!(t.selected_value, 1);
        assert_eq!(t.recursions, 0);
        assert_eq!(t.comparisons, 0);
    }

    #[test]
    fn traces() {
        let p: Permutation = "2 4 1 3".parse().unwrap();
        let t = find_select(&p, 3).unwrap();
        assert_eq!(t.pivot_sequence, vec![2, 4, 3]);
        assert_eq!(t.recursions, 2);
        assert_eq!(t.selected_value, 3);
        // 3 comparisons against 2, then 1 against 4, then 0.
        assert_eq!(t.comparisons, 4);

        let t = find_select(&Permutation::identity(3), 3).unwrap();
        assert_eq!(t.pivot_sequence, vec![1, 2, 3]);
        assert_eq!(t.recursions, 2);
    }

    #[test]
    fn selects_every_rank() {
        let p: Permutation = "5 2 8 1 9 3 7 4 6".parse().unwrap();
        for l in 1..=9 {
            let t = find_select(&p, l).unwrap();
            assert_eq!(t.selected_value, l);
            assert_eq!(t.recursions + 1, t.pivot_sequence.len());
        }
        assert!(find_select(&p, 0).is_err());
        assert!(find_select(&p, 10).is_err());
    }
}
