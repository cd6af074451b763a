//! Structured verification reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::char_alg::Gf2Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unsupported,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// One differing piece of an asserted identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub check: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    pub lhs: Value,
    pub rhs: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub status: Status,
    #[serde(default)]
    pub checks: Vec<Check>,
    pub witnesses: Vec<Witness>,
    pub artifacts: BTreeMap<String, Value>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            params: BTreeMap::new(),
            status: Status::Pass,
            checks: Vec::new(),
            witnesses: Vec::new(),
            artifacts: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn param(mut self, name: &str, value: impl Serialize) -> Self {
        self.params.insert(name.to_string(), to_value(value));
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: Option<String>) -> bool {
        if !passed {
            self.status = Status::Fail;
        }
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        });
        passed
    }

    /// Asserts `lhs == rhs`; on failure records one witness per differing degree.
    pub fn check_poly_eq(&mut self, name: &str, lhs: &Gf2Poly, rhs: &Gf2Poly) -> bool {
        let diffs = lhs.diff_by_degree(rhs);
        for (d, l, r) in &diffs {
            self.witnesses.push(Witness {
                check: name.to_string(),
                degree: Some(*d),
                lhs: to_value(l),
                rhs: to_value(r),
            });
        }
        let detail = (!diffs.is_empty()).then(|| format!("{lhs}  !=  {rhs}"));
        self.check(name, diffs.is_empty(), detail)
    }

    /// Asserts equality of two serializable values, recording a witness on failure.
    pub fn check_eq<T: PartialEq + Serialize + std::fmt::Display>(
        &mut self,
        name: &str,
        lhs: &T,
        rhs: &T,
    ) -> bool {
        let ok = lhs == rhs;
        if !ok {
            self.witnesses.push(Witness {
                check: name.to_string(),
                degree: None,
                lhs: to_value(lhs),
                rhs: to_value(rhs),
            });
        }
        self.check(name, ok, (!ok).then(|| format!("{lhs}  !=  {rhs}")))
    }

    pub fn artifact(&mut self, name: &str, value: impl Serialize) {
        self.artifacts.insert(name.to_string(), to_value(value));
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn unsupported(mut self, reason: &str) -> Self {
        self.status = Status::Unsupported;
        self.note(format!("unsupported: {reason}"));
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Unsupported => "UNSUPPORTED",
        };
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "{} [{}]: {status}", self.command, params.join(", "));
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            let _ = writeln!(out, "  {mark} {}", c.name);
            if let Some(d) = &c.detail {
                let _ = writeln!(out, "       {d}");
            }
        }
        for (name, value) in &self.artifacts {
            let shown = match value {
                Value::String(s) => s.clone(),
                Value::Array(_) => match serde_json::from_value::<Gf2Poly>(value.clone()) {
                    Ok(p) => p.to_string(),
                    Err(_) => value.to_string(),
                },
                other => other.to_string(),
            };
            let _ = writeln!(out, "  {name}: {shown}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "  note: {n}");
        }
        out
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("value serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::char_alg::wpoly;

    #[test]
    fn failing_check_records_witnesses() {
        let mut r = Report::new("demo").param("k", 3);
        assert!(r.check_poly_eq("same", &wpoly(&[&[4, 4]]), &wpoly(&[&[4, 4]])));
        assert!(!r.check_poly_eq("differs", &wpoly(&[&[4, 4], &[2]]), &wpoly(&[&[4, 4]])));
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.witnesses.len(), 1);
        assert_eq!(r.witnesses[0].degree, Some(2));
    }

    #[test]
    fn json_round_trip() {
        let mut r = Report::new("demo").param("r", 2);
        r.artifact("poly", wpoly(&[&[3, 5]]));
        r.note("hello");
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["command", "params", "status", "witnesses", "artifacts"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["status"], "pass");
    }
}
