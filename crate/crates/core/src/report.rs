//! Pass/fail records shared by the verification suites and the CLI.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub max_error: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckReport {
    /// An exact (symbolic) check: tolerance and error are zero on success.
    pub fn exact(name: impl Into<String>, failure: Option<String>) -> Self {
        let pass = failure.is_none();
        CheckReport {
            name: name.into(),
            pass,
            max_error: if pass { 0.0 } else { 1.0 },
            tolerance: 0.0,
            detail: failure.unwrap_or_else(|| "ok".into()),
        }
    }

    pub fn numeric(name: impl Into<String>, max_error: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        CheckReport { name: name.into(), pass: max_error.is_finite() && max_error < tolerance, max_error, tolerance, detail: detail.into() }
    }

    pub fn failed(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckReport { name: name.into(), pass: false, max_error: f64::INFINITY, tolerance: 0.0, detail: detail.into() }
    }
}
