use serde::{Deserialize, Serialize};

/// Outcome of one named inequality. `margin` is the slack in the direction
/// of the inequality (nonnegative when it holds), as an `f64` for reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub margin: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, margin: f64) -> Self {
        Check { name: name.into(), pass, margin }
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}
