//! Check reports in human and machine form.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub expected: String,
    pub actual: String,
    /// The law or worked example the check is anchored to.
    pub law: String,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        law: impl Into<String>,
        expected: impl ToString,
        actual: impl ToString,
    ) -> Self {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        Self { name: name.into(), pass: expected == actual, expected, actual, law: law.into() }
    }

    /// A check whose verdict is decided by the caller.
    pub fn verdict(
        name: impl Into<String>,
        law: impl Into<String>,
        pass: bool,
        expected: impl ToString,
        actual: impl ToString,
    ) -> Self {
        Self { name: name.into(), pass, expected: expected.to_string(), actual: actual.to_string(), law: law.into() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub checks: Vec<Check>,
    /// Computed values, keyed by name.
    pub results: BTreeMap<String, Value>,
    /// Random seeds used, keyed by suite.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub seeds: BTreeMap<String, u64>,
    pub exit_status: i32,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self { command: command.into(), ..Self::default() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
        self.exit_status = self.status();
    }

    pub fn result(&mut self, key: impl Into<String>, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.results.insert(key.into(), v);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// 0 when every check passes, 1 otherwise.
    pub fn status(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command);
        for (k, v) in &self.results {
            let shown = match v {
                Value::String(t) => t.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(s, "{k}: {shown}");
        }
        for (k, v) in &self.seeds {
            let _ = writeln!(s, "seed {k}: {v}");
        }
        for c in &self.checks {
            let mark = if c.pass { "PASS" } else { "FAIL" };
            if c.pass {
                let _ = writeln!(s, "{mark} {}: {} [{}]", c.name, c.actual, c.law);
            } else {
                let _ = writeln!(s, "{mark} {}: expected {}, got {} [{}]", c.name, c.expected, c.actual, c.law);
            }
        }
        if !self.checks.is_empty() {
            let passed = self.checks.iter().filter(|c| c.pass).count();
            let _ = writeln!(s, "{passed}/{} checks passed", self.checks.len());
        }
        s
    }

    /// Pretty JSON with sorted keys.
    pub fn machine(&self) -> String {
        let value = serde_json::to_value(self).expect("report is plain data");
        let mut s = serde_json::to_string_pretty(&value).expect("a Value always serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_follows_checks() {
        let mut r = Report::new("demo");
        assert_eq!(r.status(), 0);
        r.push(Check::new("a", "law", 1, 1));
        assert_eq!(r.exit_status, 0);
        r.push(Check::new("b", "law", 1, 2));
        assert_eq!(r.exit_status, 1);
        assert_eq!(r.failures().count(), 1);
        assert!(r.human().contains("FAIL b: expected 1, got 2 [law]"));
    }

    #[test]
    fn machine_form_is_sorted_json() {
        let mut r = Report::new("demo");
        r.result("zeta", 1);
        r.result("alpha", "x");
        let m = r.machine();
        let v: Value = serde_json::from_str(&m).unwrap();
        assert_eq!(v["results"]["alpha"], "x");
        assert!(m.find("\"alpha\"").unwrap() < m.find("\"zeta\"").unwrap());
        assert!(m.find("\"checks\"").unwrap() < m.find("\"command\"").unwrap());
    }
}
