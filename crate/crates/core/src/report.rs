//! Check-result records shared by every verification suite.
//!
//! Each numerical verification produces one [`CheckResult`]: the residual that
//! was measured, the tolerance it was held to, and the anchor of the statement
//! being verified.  Suites are just vectors of these; the CLI serializes them
//! verbatim.

use serde::{Deserialize, Serialize};

/// Outcome of one numerical check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    /// Machine-readable name, e.g. `"antipode_left"` or `"pt_cocentral"`.
    pub check_name: String,
    /// Anchor of the statement verified, e.g. `"Thm:PT(2)"`.
    pub paper_anchor: String,
    /// Measured residual (relative unless the check says otherwise).
    pub residual: f64,
    /// Tolerance the residual is held to.
    pub tol: f64,
    /// `residual <= tol` (and the residual is finite).
    pub pass: bool,
}

impl CheckResult {
    /// Record a residual against a tolerance.
    pub fn new(
        check_name: impl Into<String>,
        paper_anchor: impl Into<String>,
        residual: f64,
        tol: f64,
    ) -> Self {
        Self {
            check_name: check_name.into(),
            paper_anchor: paper_anchor.into(),
            residual,
            tol,
            pass: residual.is_finite() && residual <= tol,
        }
    }

    /// Record a boolean fact (residual 0 or 1).
    pub fn flag(
        check_name: impl Into<String>,
        paper_anchor: impl Into<String>,
        ok: bool,
    ) -> Self {
        Self::new(check_name, paper_anchor, if ok { 0.0 } else { 1.0 }, 0.5)
    }
}

/// A named collection of check results.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CheckSuite {
    pub suite_name: String,
    pub checks: Vec<CheckResult>,
}

impl CheckSuite {
    pub fn new(suite_name: impl Into<String>) -> Self {
        Self { suite_name: suite_name.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, check: CheckResult) {
        self.checks.push(check);
    }

    /// True when every check passed.
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Largest residual relative to its tolerance (0 when empty).
    pub fn worst_ratio(&self) -> f64 {
        self.checks
            .iter()
            .map(|c| c.residual / c.tol)
            .fold(0.0, f64::max)
    }

    /// The failing checks, if any.
    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}
