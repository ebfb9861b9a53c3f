//! Verdict records for the identities and inequalities behind the
//! minimality of the ball, evaluated on radial sets.
//!
//! Every check returns [`VerdictRecord`]s. Inequalities are written as
//! `lhs ≤ rhs` and report the margin `rhs − lhs`; identities report
//! `|lhs − rhs|`. Conditional statements whose hypothesis fails on the input
//! produce skip records instead of failures.

mod checks;
mod record;
mod suite;

pub use checks::{
    check_counterexample_scan, check_even_chain, check_laplace_and_semigroup, check_lemma, check_mean_value_n3,
    check_nl_upper_bound, check_odd_chain, check_quadratic_positivity, describe, extension_constant,
    extension_sphere_mean, odd_chain_constant, sample_radii, Verifier, EXTENSION_RADII, EXTENSION_REL_TOL,
    JUMP_EXCLUSION, LAPLACE_STEPS, LAPLACE_TOL, SEMIGROUP_TOL,
};
pub use record::{write_records, CheckKind, Status, Summary, VerdictRecord};
pub use suite::{random_battery, run_suite, BatteryItem, Suite, SuiteConfig, COUNTEREXAMPLE_EPS, DEFAULT_BATTERY};
