//! Storage pools, capacity accounting and IO500 result files.
//!
//! Device capacities are decimal bytes as sold. The gap between raw and
//! usable capacity is kept as an opaque fraction; no redundancy scheme is
//! assumed.
//!
//! IO500 files hold one metric per line, `name value unit`, where the unit
//! is `GB/s` or `kIOPS` and the value may use a decimal comma. Lines
//! starting with `#` are comments; `# io500: <label>` names the run.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{AnalysisError, LoadError};
use crate::model::check::{index, join, Checker};
use crate::perf::{speedup, Orientation, SpeedupResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct StorageSpec {
    pub filesystem_label: String,
    pub usable_capacity_bytes: u64,
    pub pools: Vec<Pool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub servers: Vec<StorageServer>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum Medium {
    Nvme,
    Hdd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct Pool {
    pub name: String,
    pub device_count: u64,
    pub device_capacity_bytes: u64,
    pub medium: Medium,
    /// Enclosures the devices are spread over, if known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enclosures: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct StorageServer {
    pub name: String,
    pub canisters: u32,
}

/// Devices times device size; saturates rather than wrapping.
pub fn pool_raw_capacity(p: &Pool) -> u64 {
    p.device_count.saturating_mul(p.device_capacity_bytes)
}

impl StorageSpec {
    pub fn raw_capacity_bytes(&self) -> u64 {
        self.pools.iter().map(pool_raw_capacity).fold(0, u64::saturating_add)
    }

    pub(crate) fn validate(&self, path: &str, c: &mut Checker) {
        c.nonempty(path, "filesystem_label", &self.filesystem_label);
        c.positive_int(path, "usable_capacity_bytes", self.usable_capacity_bytes);
        for (i, p) in self.pools.iter().enumerate() {
            let pp = index(path, "pools", i);
            c.nonempty(&pp, "name", &p.name);
            c.positive_int(&pp, "device_count", p.device_count);
            c.positive_int(&pp, "device_capacity_bytes", p.device_capacity_bytes);
            if let Some(e) = p.enclosures {
                c.ensure(
                    e > 0 && p.device_count % u64::from(e) == 0,
                    join(&pp, "enclosures"),
                    format!("{} devices do not split evenly over {e} enclosures", p.device_count),
                );
            }
        }
        for (i, s) in self.servers.iter().enumerate() {
            let sp = index(path, "servers", i);
            c.nonempty(&sp, "name", &s.name);
            c.positive_int(&sp, "canisters", s.canisters.into());
        }
        let raw = self.raw_capacity_bytes();
        c.ensure(
            self.usable_capacity_bytes <= raw,
            join(path, "usable_capacity_bytes"),
            format!("usable {} B exceeds raw {raw} B", self.usable_capacity_bytes),
        );
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapacitySummary {
    pub raw_bytes: u64,
    pub usable_bytes: u64,
    pub usable_fraction: f64,
}

pub fn capacity_summary(s: &StorageSpec) -> Result<CapacitySummary, AnalysisError> {
    let raw = s.raw_capacity_bytes();
    if s.usable_capacity_bytes > raw {
        return Err(AnalysisError::UsableExceedsRaw {
            usable: s.usable_capacity_bytes,
            raw,
        });
    }
    if raw == 0 {
        return Err(AnalysisError::NonPositive {
            name: "raw capacity",
            value: 0.0,
        });
    }
    Ok(CapacitySummary {
        raw_bytes: raw,
        usable_bytes: s.usable_capacity_bytes,
        usable_fraction: s.usable_capacity_bytes as f64 / raw as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Io500Unit {
    #[serde(rename = "GB/s")]
    GbPerS,
    #[serde(rename = "kIOPS")]
    KIops,
}

impl fmt::Display for Io500Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Io500Unit::GbPerS => "GB/s",
            Io500Unit::KIops => "kIOPS",
        })
    }
}

impl FromStr for Io500Unit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("GB/s") {
            Ok(Io500Unit::GbPerS)
        } else if s.eq_ignore_ascii_case("kIOPS") {
            Ok(Io500Unit::KIops)
        } else {
            Err(format!("unknown unit `{s}` (expected GB/s or kIOPS)"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Io500Metric {
    pub name: String,
    pub value: f64,
    pub unit: Io500Unit,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Io500Report {
    pub spec_label: String,
    pub metrics: Vec<Io500Metric>,
}

const LABEL_PREFIX: &str = "io500:";

impl Io500Report {
    pub fn metric(&self, name: &str) -> Option<&Io500Metric> {
        self.metrics.iter().find(|m| m.name == name)
    }

    pub fn parse(text: &str) -> Result<Self, LoadError> {
        let mut report = Io500Report::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = n + 1;
            let err = |message: String| LoadError::Line { line: lineno, message };
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(label) = comment.trim().strip_prefix(LABEL_PREFIX) {
                    report.spec_label = label.trim().to_string();
                }
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() < 3 {
                return Err(err(format!("expected `name value unit`, got `{line}`")));
            }
            let unit: Io500Unit = tokens[tokens.len() - 1].parse().map_err(err)?;
            let value = parse_value(tokens[tokens.len() - 2]).map_err(err)?;
            let name = tokens[..tokens.len() - 2].join(" ");
            if report.metric(&name).is_some() {
                return Err(err(format!("duplicate metric `{name}`")));
            }
            report.metrics.push(Io500Metric { name, value, unit });
        }
        Ok(report)
    }

    /// Line-format text that [`Io500Report::parse`] reads back unchanged.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if !self.spec_label.is_empty() {
            out.push_str(&format!("# {LABEL_PREFIX} {}\n", self.spec_label));
        }
        for m in &self.metrics {
            out.push_str(&format!("{} {} {}\n", m.name, m.value, m.unit));
        }
        out
    }
}

/// Accepts `179.2` and `179,2`; rejects mixed separators.
fn parse_value(token: &str) -> Result<f64, String> {
    if token.contains(',') && token.contains('.') {
        return Err(format!("ambiguous number `{token}`"));
    }
    if token.matches(',').count() > 1 {
        return Err(format!("unparsable number `{token}`"));
    }
    let value: f64 = token
        .replace(',', ".")
        .parse()
        .map_err(|_| format!("unparsable number `{token}`"))?;
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(format!("value must be positive, got `{token}`"))
    }
}

pub fn load_io500(path: impl AsRef<Path>) -> Result<Io500Report, LoadError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Io500Report::parse(&text)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricSpeedup {
    pub name: String,
    pub unit: Io500Unit,
    pub speedup: SpeedupResult,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Io500Comparison {
    pub matched: Vec<MetricSpeedup>,
    pub only_in_baseline: Vec<String>,
    pub only_in_candidate: Vec<String>,
}

/// Per-metric `candidate / baseline`, in baseline order. Metrics whose
/// units disagree count as unmatched on both sides.
pub fn io500_compare(baseline: &Io500Report, candidate: &Io500Report) -> Io500Comparison {
    let mut out = Io500Comparison::default();
    for a in &baseline.metrics {
        match candidate.metric(&a.name) {
            Some(b) if b.unit == a.unit => {
                // Both values are positive by construction of the parser.
                if let Ok(s) = speedup(a.value, b.value, Orientation::HigherIsBetter) {
                    out.matched.push(MetricSpeedup {
                        name: a.name.clone(),
                        unit: a.unit,
                        speedup: s,
                    });
                }
            }
            _ => out.only_in_baseline.push(a.name.clone()),
        }
    }
    for b in &candidate.metrics {
        if !out.matched.iter().any(|m| m.name == b.name) {
            out.only_in_candidate.push(b.name.clone());
        }
    }
    out
}
