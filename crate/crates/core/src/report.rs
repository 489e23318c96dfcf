//! Residual checks and machine-readable command reports.

use serde::Serialize;

/// Convention used for `omega` in every report.
pub const OMEGA_CONVENTION: &str = "exp(2*pi*i/p)";

/// Default numerical tolerance (Frobenius norm).
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Warn,
    Fail,
}

/// One named family of residual measurements: how many were taken, the
/// worst one, and where it occurred.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualCheck {
    pub name: String,
    pub count: u64,
    pub max_residual: f64,
    pub tolerance: f64,
    pub worst: Option<String>,
}

impl ResidualCheck {
    pub fn new(name: impl Into<String>, tolerance: f64) -> Self {
        ResidualCheck { name: name.into(), count: 0, max_residual: 0.0, tolerance, worst: None }
    }

    /// Records a residual; `witness` is only evaluated for a new maximum.
    /// NaN counts as an infinite residual.
    pub fn record(&mut self, residual: f64, witness: impl FnOnce() -> String) {
        self.count += 1;
        let r = if residual.is_nan() { f64::INFINITY } else { residual };
        if self.worst.is_none() || r > self.max_residual {
            self.max_residual = self.max_residual.max(r);
            self.worst = Some(witness());
        }
    }

    pub fn merge(&mut self, other: ResidualCheck) {
        self.count += other.count;
        if other.worst.is_some() && (self.worst.is_none() || other.max_residual > self.max_residual) {
            self.max_residual = self.max_residual.max(other.max_residual);
            self.worst = other.worst;
        }
    }

    pub fn passed(&self) -> bool {
        self.max_residual <= self.tolerance
    }

    pub fn verdict(&self) -> Verdict {
        if self.passed() {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// A single line in a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckRecord {
    pub fn verdict(name: impl Into<String>, verdict: Verdict, detail: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            verdict,
            residual: None,
            tolerance: None,
            count: None,
            detail: Some(detail.into()),
        }
    }
}

impl From<&ResidualCheck> for CheckRecord {
    fn from(c: &ResidualCheck) -> Self {
        CheckRecord {
            name: c.name.clone(),
            verdict: c.verdict(),
            residual: Some(c.max_residual),
            tolerance: Some(c.tolerance),
            count: Some(c.count),
            detail: c.worst.as_ref().map(|w| format!("worst at {w}")),
        }
    }
}

/// The JSON document every command emits. Field order is fixed and no
/// timestamps are included, so identical inputs give identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub toolkit_version: String,
    pub inputs_digest: String,
    pub omega_convention: String,
    pub tolerance: Option<f64>,
    pub checks: Vec<CheckRecord>,
    pub summary: Verdict,
    pub data: serde_json::Value,
}

impl Report {
    pub fn new(command: &str, inputs_digest: String) -> Self {
        Report {
            command: command.to_string(),
            toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
            inputs_digest,
            omega_convention: OMEGA_CONVENTION.to_string(),
            tolerance: None,
            checks: Vec::new(),
            summary: Verdict::Pass,
            data: serde_json::Value::Null,
        }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.checks.push(record);
        self.refresh_summary();
    }

    pub fn push_residual(&mut self, check: &ResidualCheck) {
        self.push(check.into());
    }

    fn refresh_summary(&mut self) {
        self.summary =
            if self.checks.iter().any(|c| c.verdict == Verdict::Fail) { Verdict::Fail } else { Verdict::Pass };
    }

    pub fn first_failure(&self) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.verdict == Verdict::Fail)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residual_tracking() {
        let mut c = ResidualCheck::new("idempotent", 1e-9);
        c.record(0.0, || "a".into());
        c.record(1e-3, || "b".into());
        c.record(1e-6, || "c".into());
        assert_eq!(c.count, 3);
        assert_eq!(c.max_residual, 1e-3);
        assert_eq!(c.worst.as_deref(), Some("b"));
        assert!(!c.passed());
        c.record(f64::NAN, || "nan".into());
        assert!(!c.passed());
    }

    #[test]
    fn summary_follows_checks() {
        let mut r = Report::new("x", "d".into());
        r.push(CheckRecord::verdict("a", Verdict::Warn, "w"));
        assert_eq!(r.summary, Verdict::Pass);
        r.push(CheckRecord::verdict("b", Verdict::Fail, "f"));
        assert_eq!(r.summary, Verdict::Fail);
        assert_eq!(r.first_failure().unwrap().name, "b");
    }
}
