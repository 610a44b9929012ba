//! Containment probabilities, critical probabilities, and the checks that
//! turn the threshold theorems into pass/fail records.
//!
//! Tolerance policy, used by every verifier: statistical comparisons allow
//! [`SIGMAS`] standard errors, deterministic ones [`DETERMINISTIC_TOL`], and
//! Monte Carlo intervals are 95% Wilson intervals. Each record carries the
//! tolerance it was judged with.

mod exact;
mod monte_carlo;
mod verify;

use serde::{Deserialize, Serialize};

pub use exact::{exact_prob_contains, pc_exact, ContainmentPolynomial, MAX_COMPONENT};
pub use monte_carlo::{mc_prob_contains, pc_monte_carlo, wilson, ProbEstimate, CHUNK};
pub use verify::{
    constant_check, corollary_eps, lemma44_record, not_small_q, pc_auto, prob_auto, records_to_csv,
    verify_kkpp, verify_main, verify_main_at, verify_prop21, ConstantReport, KkppReport,
    MainReport, ProbValue, VerificationRecord, VerifyOptions,
};

/// Standard errors allowed in statistical comparisons.
pub const SIGMAS: f64 = 3.0;
/// Slack for comparisons between deterministic quantities.
pub const DETERMINISTIC_TOL: f64 = 1e-9;
/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;
/// Bracket width at which exact bisection for `p_c` stops.
pub const PC_TOL: f64 = 1e-12;
/// Relative step above `q(H)` used where a theorem needs `H` not q-small.
pub const DEFAULT_DELTA: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    MonteCarlo,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

/// A critical probability with its uncertainty. For the exact method the
/// interval is the final bisection bracket; for Monte Carlo it is the span
/// between the largest probed point confidently below 1/2 and the smallest
/// confidently above.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdEstimate {
    pub value: f64,
    pub method: Method,
    /// Draws per probability evaluation (0 for exact).
    pub trials: usize,
    pub evaluations: usize,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: Option<u64>,
}
