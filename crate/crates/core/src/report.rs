//! Structured pass/fail records for inequality and identity checks.

use serde::{Deserialize, Serialize};

/// One named check with a signed margin.
///
/// The margin is oriented so that larger is better: a check passes when its
/// margin is at least `-slack` for the slack chosen by the producer. Checks
/// that are expected to fail (documented counterexamples) carry
/// `expected = false`; such a check contributes to the report verdict by
/// failing, and the report records that the failure was anticipated.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub margin: f64,
    /// Whether the check was expected to pass. `pass == expected` means the
    /// outcome matches the prediction.
    pub expected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, pass: bool, margin: f64) -> Self {
        CheckResult {
            name: name.into(),
            pass,
            margin,
            expected: true,
            detail: None,
        }
    }

    pub fn expected_fail(mut self) -> Self {
        self.expected = false;
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    /// The outcome matches the prediction (`pass` for ordinary checks,
    /// `!pass` for documented expected failures).
    pub fn as_predicted(&self) -> bool {
        self.pass == self.expected
    }
}

/// A collection of checks run under one name, e.g. one verification suite.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub checks: Vec<CheckResult>,
    /// True when every check matched its prediction.
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>, checks: Vec<CheckResult>) -> Self {
        let pass = checks.iter().all(|c| c.as_predicted());
        VerificationReport {
            name: name.into(),
            checks,
            pass,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
