use std::fmt::Write as _;

use serde::Serialize;

use eqloc::homalg::HomologyGroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// A result the underlying theorem rules out: always fatal.
    TheoremViolation,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

/// Homology per degree, as invariant factors (`0` for a free summand).
#[derive(Clone, Debug, Serialize)]
pub struct HomologyTable {
    pub label: String,
    pub degrees: Vec<Vec<String>>,
}

impl HomologyTable {
    pub fn new(label: impl Into<String>, groups: &[HomologyGroup]) -> Self {
        HomologyTable {
            label: label.into(),
            degrees: groups
                .iter()
                .map(|h| h.invariant_factors().iter().map(ToString::to_string).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorReport {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub scenario: serde_json::Value,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub homology: Vec<HomologyTable>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<serde_json::Value>,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
    /// Only filled when timing is requested, so reports stay reproducible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(scenario: serde_json::Value) -> Self {
        Report {
            scenario,
            checks: Vec::new(),
            homology: Vec::new(),
            witnesses: Vec::new(),
            details: serde_json::Value::Null,
            error: None,
            timing_ms: None,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, verdict: Verdict, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            verdict,
            detail: detail.into(),
        });
    }

    /// Passes when `ok`, otherwise records `failure`.
    pub fn expect(&mut self, name: impl Into<String>, ok: bool, failure: Verdict, detail: impl Into<String>) {
        self.check(name, if ok { Verdict::Pass } else { failure }, detail);
    }

    pub fn table(&mut self, label: impl Into<String>, groups: &[HomologyGroup]) {
        self.homology.push(HomologyTable::new(label, groups));
    }

    pub fn has_violation(&self) -> bool {
        self.checks.iter().any(|c| c.verdict == Verdict::TheoremViolation)
    }

    pub fn succeeded(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.verdict == Verdict::Pass)
    }

    /// Process exit code: 0 when everything passed, 2 on a theorem
    /// violation, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.has_violation() {
            2
        } else if self.succeeded() {
            0
        } else {
            1
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let task = self.scenario.get("task").and_then(|t| t.as_str()).unwrap_or("?");
        let _ = writeln!(out, "== {task}");
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error ({}): {}", e.kind, e.message);
        }
        for c in &self.checks {
            let v = match c.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::TheoremViolation => "THEOREM VIOLATION",
            };
            if c.detail.is_empty() {
                let _ = writeln!(out, "  [{v}] {}", c.name);
            } else {
                let _ = writeln!(out, "  [{v}] {}: {}", c.name, c.detail);
            }
        }
        for t in &self.homology {
            let _ = writeln!(out, "  {}", t.label);
            for (k, d) in t.degrees.iter().enumerate() {
                // d1|d2|... with 0 for a free summand; "-" is the trivial group.
                let factors = if d.is_empty() { "-".to_string() } else { d.join("|") };
                let _ = writeln!(out, "    H{k}  {factors}");
            }
        }
        for w in &self.witnesses {
            let _ = writeln!(out, "  witness {w}");
        }
        if !self.details.is_null() {
            if let Some(text) = self.details.get("text").and_then(|t| t.as_str()) {
                out.push_str(text);
            }
        }
        if let Some(ms) = self.timing_ms {
            let _ = writeln!(out, "  time {ms} ms");
        }
        out
    }
}
