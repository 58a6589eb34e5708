//! Property-test suites tying the modules together: Hedberg pointwise
//! dominations, operator norm-ratio families, the good-lambda inequality,
//! sharp-maximal estimates and the built-in examples table.

use crate::report::FitReport;

pub mod families;
pub mod suites;

pub use families::{FamilyMember, TestFamily};
pub use suites::*;

/// Slack budget applied where a finite ball family under-approximates a
/// supremum on the large side of an inequality (printed in every report).
pub const GOOD_LAMBDA_SLACK: f64 = 1.0;

pub fn combined_pass(reports: &[&FitReport]) -> bool {
    reports.iter().all(|r| r.pass)
}
