//! Line-oriented check reports shared by the validators.

use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub rule: String,
    pub passed: bool,
    pub detail: String,
}

/// A list of pass/fail findings plus free-form parameters (fan-out, bounds,
/// active readings) that a consumer needs to interpret the findings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub title: String,
    pub params: Vec<(String, String)>,
    pub findings: Vec<Finding>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            ..Default::default()
        }
    }

    pub fn param(&mut self, key: impl Into<String>, value: impl ToString) {
        self.params.push((key.into(), value.to_string()));
    }

    pub fn check(&mut self, rule: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.findings.push(Finding {
            rule: rule.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn pass(&mut self, rule: impl Into<String>, detail: impl Into<String>) {
        self.check(rule, true, detail);
    }

    pub fn fail(&mut self, rule: impl Into<String>, detail: impl Into<String>) {
        self.check(rule, false, detail);
    }

    pub fn merge(&mut self, other: Report) {
        self.params.extend(other.params);
        self.findings.extend(other.findings);
    }

    pub fn all_passed(&self) -> bool {
        self.findings.iter().all(|f| f.passed)
    }

    pub fn violations(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| !f.passed)
    }

    pub fn violation_count(&self) -> usize {
        self.violations().count()
    }

    pub fn get_param(&self, key: &str) -> Option<&str> {
        self.params
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Failed findings for a given rule name.
    pub fn failed_rules(&self) -> Vec<&str> {
        let mut rules: Vec<&str> = self.violations().map(|f| f.rule.as_str()).collect();
        rules.dedup();
        rules
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        if !self.title.is_empty() {
            let _ = writeln!(out, "{}", self.title);
        }
        for (k, v) in &self.params {
            let _ = writeln!(out, "  {k}: {v}");
        }
        for f in &self.findings {
            let tag = if f.passed { "PASS" } else { "FAIL" };
            if f.detail.is_empty() {
                let _ = writeln!(out, "  [{tag}] {}", f.rule);
            } else {
                let _ = writeln!(out, "  [{tag}] {}: {}", f.rule, f.detail);
            }
        }
        let _ = writeln!(
            out,
            "  {} checks, {} violations",
            self.findings.len(),
            self.violation_count()
        );
        out
    }

    pub fn render_machine(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "report={}", escape(&self.title));
        for (k, v) in &self.params {
            let _ = writeln!(out, "param.{}={}", k, escape(v));
        }
        for f in &self.findings {
            let _ = writeln!(
                out,
                "check rule={} status={} detail={}",
                escape(&f.rule),
                if f.passed { "pass" } else { "fail" },
                escape(&f.detail)
            );
        }
        let _ = writeln!(out, "violations={}", self.violation_count());
        out
    }
}

/// Values in machine output never contain whitespace.
pub fn escape(s: &str) -> String {
    s.replace(' ', "_").replace('\n', "\\n")
}
