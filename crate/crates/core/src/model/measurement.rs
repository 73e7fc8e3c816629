//! Recorded benchmark results attached to a cluster description.
//!
//! Nothing here is executed; values are transcribed from prior runs and
//! only checked for plausibility (strictly positive, fractions in (0, 1]).

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::check::{index, join, Checker};
use crate::perf::Orientation;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct MeasurementSet {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flops_runs: Vec<FlopsRun>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stream_runs: Vec<StreamRun>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interconnect: Option<InterconnectRun>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub applications: Vec<ApplicationResult>,
    /// IO500 line file, relative to the cluster description.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub io500_file: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pue: Option<PueSample>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub xbtest: Vec<XbtestRun>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub other: Vec<ScalarMeasurement>,
}

/// Synthetic FLOPS microbenchmark result for one vector variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct FlopsRun {
    /// Partition or reference node the run was taken on.
    pub node: String,
    pub variant: String,
    pub observed_frequency_ghz: f64,
    pub tflops: f64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub source: String,
}

/// Full-node STREAM bandwidth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct StreamRun {
    pub node: String,
    pub numa_mode: String,
    pub gb_s: f64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub source: String,
}

/// MPI ping-pong figures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct InterconnectRun {
    pub pingpong_latency_us: f64,
    pub bidirectional_gb_s: f64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub source: String,
}

/// Application or benchmark figure, matched by name across clusters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct ApplicationResult {
    pub name: String,
    pub value: f64,
    pub unit: String,
    pub orientation: Orientation,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct PueSample {
    pub value: f64,
    pub period_label: String,
}

/// Average bandwidth per memory-test mode, as fractions of the
/// theoretical peak. Modes are: write, read, alternating, simultaneous.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct XbtestRun {
    pub accelerator: String,
    pub memory: String,
    pub mode_fractions: Vec<f64>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct ScalarMeasurement {
    pub key: String,
    pub value: f64,
    pub unit: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub source: String,
}

impl MeasurementSet {
    /// `nodes` is the set of partition and reference-node names runs may cite.
    pub(crate) fn validate(&self, path: &str, nodes: &[&str], c: &mut Checker) {
        let known = |c: &mut Checker, p: &str, name: &str| {
            c.ensure(
                nodes.contains(&name),
                join(p, "node"),
                format!("unknown partition or node `{name}`"),
            )
        };
        for (i, r) in self.flops_runs.iter().enumerate() {
            let p = index(path, "flops_runs", i);
            known(c, &p, &r.node);
            c.positive(&p, "observed_frequency_ghz", r.observed_frequency_ghz);
            c.positive(&p, "tflops", r.tflops);
        }
        for (i, r) in self.stream_runs.iter().enumerate() {
            let p = index(path, "stream_runs", i);
            known(c, &p, &r.node);
            c.positive(&p, "gb_s", r.gb_s);
        }
        if let Some(r) = &self.interconnect {
            let p = join(path, "interconnect");
            c.positive(&p, "pingpong_latency_us", r.pingpong_latency_us);
            c.positive(&p, "bidirectional_gb_s", r.bidirectional_gb_s);
        }
        for (i, a) in self.applications.iter().enumerate() {
            let p = index(path, "applications", i);
            c.nonempty(&p, "name", &a.name);
            c.positive(&p, "value", a.value);
            if self.applications[..i].iter().any(|o| o.name == a.name) {
                c.fail(join(&p, "name"), format!("duplicate application `{}`", a.name));
            }
        }
        if let Some(pue) = &self.pue {
            let p = join(path, "pue");
            c.ensure(
                pue.value.is_finite() && pue.value >= 1.0,
                join(&p, "value"),
                format!("PUE must be at least 1, got {}", pue.value),
            );
        }
        for (i, x) in self.xbtest.iter().enumerate() {
            let p = index(path, "xbtest", i);
            c.ensure(
                x.mode_fractions.len() == 4,
                join(&p, "mode_fractions"),
                format!("expected 4 mode fractions, got {}", x.mode_fractions.len()),
            );
            for (j, f) in x.mode_fractions.iter().enumerate() {
                c.fraction_half_open(&p, &format!("mode_fractions[{j}]"), *f);
            }
        }
        for (i, s) in self.other.iter().enumerate() {
            let p = index(path, "other", i);
            c.nonempty(&p, "key", &s.key);
            c.positive(&p, "value", s.value);
        }
    }
}
