//! Machine-readable check reports with deterministic serialization.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One check outcome: verdict, witnesses or certificates, and provenance.
/// Timing is recorded only on request so that reports stay byte-identical
/// across runs.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub provenance: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl CheckReport {
    pub fn pass(check: impl Into<String>) -> CheckReport {
        CheckReport {
            check: check.into(),
            verdict: Verdict::Pass,
            details: Vec::new(),
            provenance: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn fail(check: impl Into<String>, detail: impl Into<String>) -> CheckReport {
        CheckReport {
            check: check.into(),
            verdict: Verdict::Fail,
            details: vec![detail.into()],
            provenance: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn detail(mut self, line: impl Into<String>) -> CheckReport {
        self.details.push(line.into());
        self
    }

    pub fn provenance(mut self, line: impl Into<String>) -> CheckReport {
        self.provenance.push(line.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// A batch of reports, kept order-stable by check name.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub checks: Vec<CheckReport>,
    pub passed: usize,
    pub failed: usize,
}

impl SuiteReport {
    pub fn new(mut checks: Vec<CheckReport>) -> SuiteReport {
        checks.sort_by(|a, b| a.check.cmp(&b.check));
        let passed = checks.iter().filter(|c| c.passed()).count();
        let failed = checks.len() - passed;
        SuiteReport { checks, passed, failed }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
