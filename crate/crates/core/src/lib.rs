//! Node depths in random binary search trees.
//!
//! The depth `X_{n,l}` of key `l` in a search tree grown from a uniformly
//! random permutation of `1..=n` is a mixture, over the insertion position of
//! `l` and the number of smaller keys inserted before it, of sums of two
//! independent record counts. This crate evaluates that law exactly, compares
//! it with Poisson and mixed Poisson approximations in total variation and
//! Wasserstein distance, and cross-checks everything against enumeration,
//! simulation and Hoare's FIND.
//!
//! ```
//! use depthlab::exact_depth::exact_depth_pmf;
//!
//! let law = exact_depth_pmf(3, 2).unwrap();
//! assert!((law.mass(1) - 1.0 / 3.0).abs() < 1e-15);
//! ```

pub mod distributions;
pub mod error;
pub mod exact_depth;
pub mod mixing;
pub mod montecarlo;
pub mod quadrature;
pub mod sum;
pub mod trees;
pub mod verify;

pub use distributions::{BoundReport, Distance, HarmonicTable, Pmf};
pub use error::{Error, Result};
pub use exact_depth::{JointGN, MoveJointPmf};
pub use mixing::MixingMeasure;
pub use montecarlo::{EmpiricalPmf, Route, RngStream};
pub use trees::{Bst, FindTrace, Permutation, RecordDecomposition};

/// Crate version, stamped into serialized results.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
