//! Structured verification reports. Checkers never panic or error on a
//! failed identity; they return reports that the suites and the CLI
//! aggregate. Serialized output is deterministic: field order is fixed,
//! maps are sorted, and no timing data enters the document.

use std::fmt;

use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    /// The identity holds (residual exactly zero, or below tolerance).
    Pass,
    /// The identity fails.
    Fail,
    /// The result is recorded without a pass/fail judgement.
    Recorded,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum ResidualSummary {
    /// Exact symbolic zero.
    Zero,
    /// Leading part of a nonzero symbolic residual (canonical printing).
    PolynomialHead(String),
    /// Largest floating residual over all samples.
    FloatMax(f64),
    /// Free-form recorded value (counts, labels).
    Note(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    /// Stable machine identifier, unique within a suite.
    pub id: String,
    /// What the check verifies, in one phrase.
    pub anchor: String,
    pub status: CheckStatus,
    pub residual: ResidualSummary,
}

impl Check {
    pub fn pass(id: &str, anchor: &str) -> Self {
        Check {
            id: id.into(),
            anchor: anchor.into(),
            status: CheckStatus::Pass,
            residual: ResidualSummary::Zero,
        }
    }

    pub fn from_zero(id: &str, anchor: &str, is_zero: bool, head: impl FnOnce() -> String) -> Self {
        if is_zero {
            Check::pass(id, anchor)
        } else {
            Check {
                id: id.into(),
                anchor: anchor.into(),
                status: CheckStatus::Fail,
                residual: ResidualSummary::PolynomialHead(head()),
            }
        }
    }

    pub fn recorded(id: &str, anchor: &str, note: String) -> Self {
        Check {
            id: id.into(),
            anchor: anchor.into(),
            status: CheckStatus::Recorded,
            residual: ResidualSummary::Note(note),
        }
    }

    pub fn float(id: &str, anchor: &str, max_residual: f64, tol: f64) -> Self {
        Check {
            id: id.into(),
            anchor: anchor.into(),
            status: if max_residual < tol {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            residual: ResidualSummary::FloatMax(max_residual),
        }
    }

    pub fn ok(&self) -> bool {
        self.status != CheckStatus::Fail
    }
}

/// One suite run: parameters, seed and the ordered list of checks.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: String,
    /// Parameter bindings as printed strings, sorted by key.
    pub params: std::collections::BTreeMap<String, String>,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn new(suite: &str, seed: u64) -> Self {
        SuiteReport {
            schema_version: REPORT_SCHEMA_VERSION,
            suite: suite.into(),
            params: Default::default(),
            seed,
            checks: Vec::new(),
            passed: true,
        }
    }

    pub fn param(&mut self, key: &str, value: impl fmt::Display) {
        self.params.insert(key.into(), value.to_string());
    }

    pub fn push(&mut self, check: Check) {
        if !check.ok() {
            self.passed = false;
        }
        self.checks.push(check);
    }

    pub fn count_status(&self, s: CheckStatus) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("suite {}\n", self.suite));
        for (k, v) in &self.params {
            out.push_str(&format!("  param {k} = {v}\n"));
        }
        out.push_str(&format!("  seed {}\n", self.seed));
        for c in &self.checks {
            let status = match c.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Recorded => "recorded",
            };
            let residual = match &c.residual {
                ResidualSummary::Zero => "residual zero".to_string(),
                ResidualSummary::PolynomialHead(h) => format!("residual head: {h}"),
                ResidualSummary::FloatMax(m) => format!("max residual {m:e}"),
                ResidualSummary::Note(n) => n.clone(),
            };
            out.push_str(&format!("  [{status}] {} — {} ({residual})\n", c.id, c.anchor));
        }
        out.push_str(&format!(
            "  {}: {} checks, {} failed\n",
            if self.passed { "PASSED" } else { "FAILED" },
            self.checks.len(),
            self.checks.iter().filter(|c| !c.ok()).count()
        ));
        out
    }
}
