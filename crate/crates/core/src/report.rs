//! Structured verification results.

use std::collections::BTreeMap;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Version of the JSON layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Outcome of checking one identity.
///
/// A report passes when `abs_err <= sigma_factor * mc_stderr` (stochastic
/// reports only), `rel_err <= tolerance` (when set) and
/// `abs_err <= abs_tolerance` (when set).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    pub params: BTreeMap<String, Value>,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub mc_stderr: Option<f64>,
    pub sigma_factor: f64,
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub abs_tolerance: Option<f64>,
    pub pass: bool,
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_ms: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub details: Option<Value>,
    #[serde(skip)]
    forced_fail: bool,
}

impl VerificationReport {
    fn base(identity: &str, lhs: Complex64, rhs: Complex64) -> Self {
        let abs_err = (lhs - rhs).norm();
        let scale = rhs.norm();
        let rel_err = if scale > 0.0 { abs_err / scale } else { abs_err };
        VerificationReport {
            identity: identity.to_string(),
            params: BTreeMap::new(),
            lhs,
            rhs,
            abs_err,
            rel_err,
            mc_stderr: None,
            sigma_factor: 4.0,
            tolerance: None,
            abs_tolerance: None,
            pass: false,
            seed: None,
            wall_time_ms: None,
            notes: Vec::new(),
            details: None,
            forced_fail: false,
        }
    }

    /// Both sides computed deterministically; passes iff `rel_err <= tolerance`.
    pub fn deterministic(identity: &str, lhs: Complex64, rhs: Complex64, tolerance: f64) -> Self {
        let mut r = Self::base(identity, lhs, rhs);
        r.tolerance = Some(tolerance);
        r.evaluate();
        r
    }

    /// Both sides deterministic; passes iff `abs_err <= abs_tolerance`.
    pub fn absolute(identity: &str, lhs: Complex64, rhs: Complex64, abs_tolerance: f64) -> Self {
        let mut r = Self::base(identity, lhs, rhs);
        r.abs_tolerance = Some(abs_tolerance);
        r.evaluate();
        r
    }

    /// A check that could not be carried out.
    pub fn errored(identity: &str, err: &crate::Error) -> Self {
        let nan = Complex64::new(f64::NAN, 0.0);
        Self::base(identity, nan, nan).fail(err.to_string())
    }

    /// One side is a Monte Carlo estimate with standard error `stderr`.
    pub fn stochastic(
        identity: &str,
        lhs: Complex64,
        rhs: Complex64,
        stderr: f64,
        tolerance: Option<f64>,
        seed: u64,
    ) -> Self {
        let mut r = Self::base(identity, lhs, rhs);
        r.mc_stderr = Some(stderr);
        r.tolerance = tolerance;
        r.seed = Some(seed);
        r.evaluate();
        r
    }

    fn evaluate(&mut self) {
        let finite = self.lhs.is_finite() && self.rhs.is_finite();
        let within_noise = self.mc_stderr.is_none_or(|s| self.abs_err <= self.sigma_factor * s);
        let within_tol = self.tolerance.is_none_or(|t| self.rel_err <= t);
        let within_abs = self.abs_tolerance.is_none_or(|t| self.abs_err <= t);
        self.pass = finite && within_noise && within_tol && within_abs && !self.forced_fail;
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma_factor = sigma;
        self.evaluate();
        self
    }

    pub fn with_tolerance(mut self, tol: Option<f64>) -> Self {
        self.tolerance = tol;
        self.evaluate();
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn details(mut self, details: Value) -> Self {
        self.details = Some(details);
        self
    }

    /// Mark as failed regardless of the numbers.
    pub fn fail(mut self, reason: impl Into<String>) -> Self {
        self.notes.push(reason.into());
        self.forced_fail = true;
        self.evaluate();
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.wall_time_ms = Some(start.elapsed().as_millis() as u64);
        self
    }

    pub fn without_timestamp(mut self) -> Self {
        self.wall_time_ms = None;
        self
    }

    /// One-line human summary.
    pub fn summary_line(&self) -> String {
        let noise = match self.mc_stderr {
            Some(s) => format!(" stderr={s:.3e} ({:.2} sigma)", if s > 0.0 { self.abs_err / s } else { 0.0 }),
            None => String::new(),
        };
        let mut tol = self.tolerance.map(|t| format!(" tol={t:.0e}")).unwrap_or_default();
        if let Some(t) = self.abs_tolerance {
            tol.push_str(&format!(" abs_tol={t:.0e}"));
        }
        if self.forced_fail {
            tol.push_str(&format!(" [{}]", self.notes.last().map(String::as_str).unwrap_or("")));
        }
        format!(
            "{} {}: lhs={:.10} rhs={:.10} abs={:.3e} rel={:.3e}{noise}{tol}",
            if self.pass { "PASS" } else { "FAIL" },
            self.identity,
            self.lhs.re,
            self.rhs.re,
            self.abs_err,
            self.rel_err
        )
    }
}

/// A batch of reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub schema: u32,
    pub reports: Vec<VerificationReport>,
    pub passed: usize,
    pub failed: usize,
    pub all_pass: bool,
}

impl SuiteSummary {
    pub fn new(reports: Vec<VerificationReport>) -> Self {
        let passed = reports.iter().filter(|r| r.pass).count();
        let failed = reports.len() - passed;
        SuiteSummary { schema: SCHEMA_VERSION, reports, passed, failed, all_pass: failed == 0 }
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass {
            0
        } else {
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn pass_rule() {
        assert!(VerificationReport::deterministic("x", c(1.0), c(1.0 + 1e-9), 1e-8).pass);
        assert!(!VerificationReport::deterministic("x", c(1.0), c(1.1), 1e-8).pass);
        let r = VerificationReport::stochastic("x", c(1.0), c(1.03), 0.01, Some(0.05), 0);
        assert!(r.pass);
        assert!(!r.clone().with_sigma(2.0).pass);
        assert!(!r.with_tolerance(Some(0.01)).pass);
        assert!(!VerificationReport::deterministic("x", c(f64::NAN), c(1.0), 1.0).pass);
    }

    #[test]
    fn forced_failure_sticks() {
        let r = VerificationReport::deterministic("x", c(1.0), c(1.0), 1e-8).fail("refused");
        assert!(!r.pass);
        assert!(!r.with_sigma(10.0).pass);
    }

    #[test]
    fn summary_counts() {
        let s = SuiteSummary::new(vec![
            VerificationReport::deterministic("a", c(1.0), c(1.0), 1e-8),
            VerificationReport::deterministic("b", c(1.0), c(2.0), 1e-8),
        ]);
        assert_eq!((s.passed, s.failed, s.all_pass, s.exit_code()), (1, 1, false, 1));
    }
}
