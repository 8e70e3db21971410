//! Probability mass functions on the nonnegative integers and the metrics
//! used to compare them.

mod bound;
mod harmonic;
mod hypergeometric;
mod metrics;
mod pmf;
mod poisson;
mod records;

pub use bound::{BoundReport, BOUND_SLACK};
pub use harmonic::{harmonic_table, HarmonicTable};
pub use hypergeometric::hypergeometric_pmf;
pub use metrics::{ks_to_standard_normal, standard_normal_cdf, total_variation, wasserstein, Distance};
pub use pmf::{
    convolve, mean_var, Pmf, DEFAULT_TAIL_TOL, MASS_FLOOR, MAX_TRUNCATED_TAIL, NORMALIZATION_TOL,
};
pub use poisson::poisson_pmf;
pub(crate) use poisson::check_tol;
pub use records::{record_count_pmf, record_count_table};
