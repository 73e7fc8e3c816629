//! The structured result every command produces.
//!
//! Findings keep insertion order, which each command fixes; numbers are
//! rounded to six significant digits when the report is built so that
//! machine output is byte-stable.

use std::path::Path;

use clusterplan::units::round_sig;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

pub const SIGNIFICANT_DIGITS: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool_version: String,
    pub command: String,
    pub inputs: Vec<Input>,
    pub findings: Vec<Finding>,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Input {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub key: String,
    pub value: Value,
    pub unit: String,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Number(f64),
    Text(String),
    Bool(bool),
}

impl Value {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Number(v) => Some(*v),
            _ => None,
        }
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Number(round_sig(v, SIGNIFICANT_DIGITS))
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::from(v as f64)
    }
}

impl From<u32> for Value {
    fn from(v: u32) -> Self {
        Value::from(f64::from(v))
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

/// A rendered-only table, e.g. the per-leaf port budget.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: impl Into<String>, headers: &[&str]) -> Self {
        Self {
            title: title.into(),
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            inputs: Vec::new(),
            findings: Vec::new(),
            violations: Vec::new(),
        }
    }

    /// Records `path` with the SHA-256 of its bytes.
    pub fn input(&mut self, path: &Path) -> Result<(), CliError> {
        let bytes = std::fs::read(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        self.inputs.push(Input {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        Ok(())
    }

    pub fn add(&mut self, key: impl Into<String>, value: impl Into<Value>, unit: &str, provenance: impl Into<String>) {
        self.findings.push(Finding {
            key: key.into(),
            value: value.into(),
            unit: unit.to_string(),
            provenance: provenance.into(),
        });
    }

    pub fn finding(&self, key: &str) -> Option<&Finding> {
        self.findings.iter().find(|f| f.key == key)
    }

    pub fn number(&self, key: &str) -> Option<f64> {
        self.finding(key).and_then(|f| f.value.as_f64())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }
}

/// A report plus the tables shown in human output.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub report: Report,
    pub tables: Vec<Table>,
}

impl Output {
    pub fn new(command: &str) -> Self {
        Self {
            report: Report::new(command),
            tables: Vec::new(),
        }
    }

    /// 0 when nothing was violated, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.report.violations.is_empty() {
            0
        } else {
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_are_rounded_on_entry() {
        let mut r = Report::new("x");
        r.add("a", 0.919_456_789, "", "");
        assert_eq!(r.number("a"), Some(0.919457));
    }

    #[test]
    fn values_serialize_untagged() {
        let j = serde_json::to_string(&[Value::from(1.5), Value::from("t"), Value::from(true)]).unwrap();
        assert_eq!(j, r#"[1.5,"t",true]"#);
    }
}
