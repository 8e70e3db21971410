use serde::{Deserialize, Serialize};

/// Slack allowed when deciding whether `lhs <= rhs`.
pub const BOUND_SLACK: f64 = 1e-12;

/// Outcome of checking an inequality `lhs <= rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// `rhs - lhs`.
    pub margin: f64,
}

impl BoundReport {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            holds: lhs <= rhs + BOUND_SLACK,
            margin: rhs - lhs,
        }
    }
}
