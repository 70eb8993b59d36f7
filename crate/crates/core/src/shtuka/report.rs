use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exactfield::{CycNumber, FieldMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// An exact value rendered as canonical cyclotomic literals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Literal {
    Scalar(String),
    Vector(Vec<String>),
    Matrix(Vec<Vec<String>>),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedValue {
    pub name: String,
    pub value: Literal,
    /// Short human-readable form.
    pub display: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub detail: String,
    pub values: Vec<NamedValue>,
    pub elapsed_ms: u64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Collects the values and verdict of one check.
#[derive(Debug, Default)]
pub struct CheckBuilder {
    values: Vec<NamedValue>,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl CheckBuilder {
    fn push(&mut self, name: impl Into<String>, value: Literal, display: String) {
        self.values.push(NamedValue { name: name.into(), value, display });
    }

    pub fn scalar(&mut self, name: impl Into<String>, c: &CycNumber) {
        self.push(name, Literal::Scalar(c.to_string()), c.pretty());
    }

    pub fn vector(&mut self, name: impl Into<String>, v: &[CycNumber]) {
        let display = format!("({})", v.iter().map(CycNumber::pretty).collect::<Vec<_>>().join(", "));
        self.push(name, Literal::Vector(v.iter().map(ToString::to_string).collect()), display);
    }

    pub fn matrix(&mut self, name: impl Into<String>, m: &FieldMatrix) {
        let rows = (0..m.rows()).map(|r| m.row(r).iter().map(ToString::to_string).collect()).collect();
        let display = if m.rows() <= 6 && m.cols() <= 6 {
            let row = |r: usize| format!("[{}]", m.row(r).iter().map(CycNumber::pretty).collect::<Vec<_>>().join(", "));
            format!("[{}]", (0..m.rows()).map(row).collect::<Vec<_>>().join(", "))
        } else {
            format!("{}x{} matrix", m.rows(), m.cols())
        };
        self.push(name, Literal::Matrix(rows), display);
    }

    pub fn text(&mut self, name: impl Into<String>, t: impl Into<String>) {
        let t = t.into();
        self.push(name, Literal::Text(t.clone()), t);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Record a failure unless `ok`.
    pub fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) -> bool {
        if !ok {
            self.failures.push(what());
        }
        ok
    }
}

/// Run `body`; errors become a failed check carrying the error message.
pub fn run_check(name: impl Into<String>, body: impl FnOnce(&mut CheckBuilder) -> Result<()>) -> CheckResult {
    let start = Instant::now();
    let mut b = CheckBuilder::default();
    let outcome = body(&mut b);
    if let Err(e) = outcome {
        b.failures.push(e.to_string());
    }
    let status = if b.failures.is_empty() { Status::Pass } else { Status::Fail };
    let mut detail = b.failures;
    detail.extend(b.notes);
    CheckResult {
        name: name.into(),
        status,
        detail: detail.join("; "),
        values: b.values,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub scenario: Option<String>,
    pub checks: Vec<CheckResult>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(command: impl Into<String>, scenario: Option<String>) -> Self {
        Report { command: command.into(), scenario, checks: Vec::new(), elapsed_ms: 0 }
    }

    pub fn push(&mut self, c: CheckResult) {
        self.elapsed_ms += c.elapsed_ms;
        self.checks.push(c);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| crate::Error::Io(format!("report: {e}")))
    }

    /// Human-readable table; large matrices are listed by shape only.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.command, self.scenario.as_deref().unwrap_or(""));
        for c in &self.checks {
            let tag = if c.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "  [{tag}] {} ({} ms)", c.name, c.elapsed_ms);
            if !c.detail.is_empty() {
                let _ = writeln!(out, "         {}", c.detail);
            }
            for v in &c.values {
                let _ = writeln!(out, "         {:<24} {}", v.name, v.display);
            }
        }
        let verdict = if self.passed() { "all checks passed" } else { "SOME CHECKS FAILED" };
        let _ = writeln!(out, "  {verdict} ({} ms)", self.elapsed_ms);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{make_context, parse_cyc};

    #[test]
    fn report_round_trips_and_aggregates() {
        let ctx = make_context(3).unwrap();
        let mut r = Report::new("st-check", Some("z3-frobenius".into()));
        r.push(run_check("ok", |b| {
            b.scalar("z", &parse_cyc(&ctx, "zeta(3)").unwrap());
            Ok(())
        }));
        assert!(r.passed());
        r.push(run_check("bad", |b| {
            b.expect(false, || "mismatch".into());
            Ok(())
        }));
        r.push(run_check("err", |_| Err(crate::Error::CheckFailed("boom".into()))));
        assert!(!r.passed());
        assert_eq!(r.checks[2].status, Status::Fail);
        assert!(r.checks[2].detail.contains("boom"));
        let back = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(r.render().contains("[FAIL] bad"));
    }
}
