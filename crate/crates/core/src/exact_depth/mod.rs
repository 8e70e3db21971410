//! Exact law of the node depth `X_{n,l}`, its closed-form moments and the
//! approximation bounds evaluated on it.

mod bounds;
mod depth;
mod joint;
mod moments;
mod oracle;

pub use bounds::{
    central_key, lemma2_value, lemma5_margin, theorem3_margin, theorem3_rhs, theorem6_distance,
    MixedPoissonFit,
};
pub use depth::{
    exact_depth_pmf, exact_depth_pmf_capped, exact_move_joint_pmf, exact_move_joint_pmf_capped,
    MoveJointPmf, DEFAULT_N_CAP,
};
pub use joint::{joint_gn, JointGN};
pub(crate) use joint::check_key;
pub use moments::{ad_mean, kp_variance};
pub use oracle::{brute_force_depth_counts, brute_force_depth_pmf, for_each_permutation, BRUTE_FORCE_MAX_N};
