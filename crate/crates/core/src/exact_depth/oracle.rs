//! Brute-force depth law by enumerating every insertion order.

use crate::distributions::Pmf;
use crate::error::{Error, Result};
use crate::trees::{build_bst, node_depth, Permutation};

use super::joint::check_key;

/// Largest `n` the enumeration accepts.
pub const BRUTE_FORCE_MAX_N: usize = 9;

/// Depth law of key `l` from all `n!` permutations, tallied with exact
/// integer counts.
pub fn brute_force_depth_pmf(n: usize, l: usize) -> Result<Pmf> {
    check_key(n, l)?;
    let counts = brute_force_depth_counts(n, l)?;
    let total: u64 = counts.iter().sum();
    let masses = counts.iter().map(|&c| c as f64 / total as f64).collect();
    Ok(Pmf::from_parts(0, masses, 0.0))
}

/// `counts[d]` = number of permutations of `1..=n` placing key `l` at depth `d`.
pub fn brute_force_depth_counts(n: usize, l: usize) -> Result<Vec<u64>> {
    check_key(n, l)?;
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::Resource {
            what: "n (brute force)",
            requested: n,
            cap: BRUTE_FORCE_MAX_N,
        });
    }
    let mut counts = vec![0u64; n];
    for_each_permutation(n, |values| {
        let perm = Permutation::new(values.to_vec()).expect("enumeration yields permutations");
        let depth = node_depth(&build_bst(&perm), l).expect("every key is present");
        counts[depth] += 1;
    });
    Ok(counts)
}

/// Calls `f` once for every permutation of `1..=n` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut values: Vec<usize> = (1..=n).collect();
    let mut c = vec![0usize; n];
    f(&values);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                values.swap(0, i);
            } else {
                values.swap(c[i], i);
            }
            f(&values);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}
