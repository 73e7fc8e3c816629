//! Cluster description data model.
//!
//! A [`ClusterSpec`] is plain data: partitions of identical nodes, an
//! optional fabric, storage and facility section, and recorded
//! measurements. Values are checked once by [`ClusterSpec::validate`]
//! and never mutated by the analyses.

pub(crate) mod check;
pub mod hardware;
mod io;
pub mod measurement;

use std::collections::BTreeMap;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

pub use hardware::*;
pub use io::{json_schema, load_cluster, load_cluster_with, parse_cluster, save_cluster, to_json, Strictness};
pub use measurement::*;

use crate::error::Violation;
use crate::facility::FacilitySpec;
use crate::storage::StorageSpec;
use crate::topology::{FabricSpec, LinkRate};
use check::{index, join, Checker};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct ClusterSpec {
    /// File format version; only 1 is understood.
    pub schema: u32,
    pub name: String,
    #[serde(default)]
    pub partitions: Vec<Partition>,
    /// Node types known only by their configuration, not their count.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reference_nodes: Vec<NodeModel>,
    /// Accelerator models known only by their specification, not their count.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reference_accelerators: Vec<AcceleratorSpec>,
    /// Optional cross-check against the sum of partition sizes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_total_nodes: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fabric: Option<FabricSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub storage: Option<StorageSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facility: Option<FacilitySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measurements: Option<MeasurementSet>,
}

/// A set of identical nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct Partition {
    pub name: String,
    pub node_count: u32,
    /// Nodes sharing one blade; 2 for dual-node CPU blades.
    pub nodes_per_blade: u32,
    /// Nodes currently equipped, when fewer than `node_count` are populated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub active_nodes: Option<u32>,
    pub cpu: CpuSpec,
    pub memory: MemoryConfig,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub accelerators: Vec<AcceleratorSlot>,
    #[serde(default)]
    pub local_storage_bytes: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub link: Option<LinkSpec>,
}

impl Partition {
    pub fn blade_count(&self) -> u32 {
        self.node_count.checked_div(self.nodes_per_blade).unwrap_or(0)
    }

    pub fn cores(&self) -> u64 {
        u64::from(self.node_count) * self.cpu.cores_per_node()
    }

    /// Nodes that carry their accelerators; all nodes unless `active_nodes` is set.
    pub fn equipped_nodes(&self) -> u32 {
        self.active_nodes.unwrap_or(self.node_count)
    }

    fn validate(&self, path: &str, c: &mut Checker) {
        c.nonempty(path, "name", &self.name);
        c.positive_int(path, "node_count", self.node_count.into());
        c.positive_int(path, "nodes_per_blade", self.nodes_per_blade.into());
        if self.nodes_per_blade > 0 && !self.node_count.is_multiple_of(self.nodes_per_blade) {
            c.fail(
                join(path, "node_count"),
                format!(
                    "{} nodes do not fill blades of {} nodes",
                    self.node_count, self.nodes_per_blade
                ),
            );
        }
        if let Some(active) = self.active_nodes {
            c.ensure(
                active <= self.node_count,
                join(path, "active_nodes"),
                format!("{active} active nodes exceed node_count {}", self.node_count),
            );
        }
        self.cpu.validate(&join(path, "cpu"), c);
        self.memory.validate(&join(path, "memory"), c);
        for (i, slot) in self.accelerators.iter().enumerate() {
            let p = index(path, "accelerators", i);
            c.positive_int(&p, "count", slot.count.into());
            slot.accelerator.validate(&join(&p, "accelerator"), c);
        }
        if let Some(link) = &self.link {
            let p = join(path, "link");
            c.positive_int(&p, "links", link.links.into());
            link.rate.validate(&join(&p, "rate"), c);
            if link.shared_io {
                c.ensure(
                    link.scope == LinkScope::Blade,
                    join(&p, "shared_io"),
                    "shared IO links are attached per blade",
                );
            }
        }
    }
}

/// A node type described by configuration only (no node count).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct NodeModel {
    pub name: String,
    pub cpu: CpuSpec,
    pub memory: MemoryConfig,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct AcceleratorSlot {
    pub accelerator: AcceleratorSpec,
    /// Cards per node.
    pub count: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum LinkScope {
    Blade,
    Node,
}

/// Network attachment of a node or blade.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct LinkSpec {
    pub rate: LinkRate,
    pub links: u32,
    pub scope: LinkScope,
    /// Both nodes of a blade reach the network through one adapter.
    #[serde(default)]
    pub shared_io: bool,
}

impl LinkSpec {
    pub fn total_gbit_s(&self) -> f64 {
        f64::from(self.links) * self.rate.gbit_s
    }
}

/// CPU and memory of something that can run a workload: a partition
/// node or a reference node.
#[derive(Debug, Clone, Copy)]
pub struct NodeRef<'a> {
    pub name: &'a str,
    pub cpu: &'a CpuSpec,
    pub memory: &'a MemoryConfig,
    pub partition: Option<&'a Partition>,
}

/// Sum of partition sizes.
pub fn total_nodes(spec: &ClusterSpec) -> u64 {
    spec.partitions.iter().map(|p| u64::from(p.node_count)).sum()
}

/// Sum over partitions of nodes x sockets x cores per socket.
pub fn total_cores(spec: &ClusterSpec) -> u64 {
    spec.partitions.iter().map(Partition::cores).sum()
}

impl ClusterSpec {
    pub fn empty(name: impl Into<String>) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            name: name.into(),
            partitions: Vec::new(),
            reference_nodes: Vec::new(),
            reference_accelerators: Vec::new(),
            declared_total_nodes: None,
            fabric: None,
            storage: None,
            facility: None,
            measurements: None,
        }
    }

    pub fn partition(&self, name: &str) -> Option<&Partition> {
        self.partitions.iter().find(|p| p.name == name)
    }

    /// Looks a name up among partitions first, then reference nodes.
    pub fn node(&self, name: &str) -> Option<NodeRef<'_>> {
        if let Some(p) = self.partition(name) {
            return Some(NodeRef {
                name: &p.name,
                cpu: &p.cpu,
                memory: &p.memory,
                partition: Some(p),
            });
        }
        self.reference_nodes.iter().find(|n| n.name == name).map(|n| NodeRef {
            name: &n.name,
            cpu: &n.cpu,
            memory: &n.memory,
            partition: None,
        })
    }

    /// Partitions followed by reference nodes, in file order.
    pub fn nodes(&self) -> Vec<NodeRef<'_>> {
        self.partitions
            .iter()
            .map(|p| NodeRef {
                name: &p.name,
                cpu: &p.cpu,
                memory: &p.memory,
                partition: Some(p),
            })
            .chain(self.reference_nodes.iter().map(|n| NodeRef {
                name: &n.name,
                cpu: &n.cpu,
                memory: &n.memory,
                partition: None,
            }))
            .collect()
    }

    /// Every accelerator model in the file: partition slots first, then
    /// reference entries. Repeated models are listed once.
    pub fn accelerators(&self) -> Vec<&AcceleratorSpec> {
        let mut out: Vec<&AcceleratorSpec> = Vec::new();
        let slots = self
            .partitions
            .iter()
            .flat_map(|p| p.accelerators.iter().map(|s| &s.accelerator));
        for a in slots.chain(self.reference_accelerators.iter()) {
            if !out.iter().any(|o| o.model == a.model) {
                out.push(a);
            }
        }
        out
    }

    pub fn accelerator(&self, model: &str) -> Option<&AcceleratorSpec> {
        self.accelerators().into_iter().find(|a| a.model == model)
    }

    pub fn measurements(&self) -> &MeasurementSet {
        static EMPTY: std::sync::OnceLock<MeasurementSet> = std::sync::OnceLock::new();
        self.measurements
            .as_ref()
            .unwrap_or_else(|| EMPTY.get_or_init(MeasurementSet::default))
    }

    /// Every violated invariant, in a stable order. Empty means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut c = Checker::default();
        c.nonempty("", "name", &self.name);

        let mut names: Vec<&str> = Vec::new();
        for (i, p) in self.partitions.iter().enumerate() {
            let path = index("", "partitions", i);
            p.validate(&path, &mut c);
            if names.contains(&p.name.as_str()) {
                c.fail(join(&path, "name"), format!("duplicate partition name `{}`", p.name));
            }
            names.push(&p.name);
        }
        for (i, n) in self.reference_nodes.iter().enumerate() {
            let path = index("", "reference_nodes", i);
            c.nonempty(&path, "name", &n.name);
            n.cpu.validate(&join(&path, "cpu"), &mut c);
            n.memory.validate(&join(&path, "memory"), &mut c);
            if names.contains(&n.name.as_str()) {
                c.fail(join(&path, "name"), format!("duplicate node name `{}`", n.name));
            }
            names.push(&n.name);
        }

        for (i, a) in self.reference_accelerators.iter().enumerate() {
            a.validate(&index("", "reference_accelerators", i), &mut c);
        }

        if let Some(declared) = self.declared_total_nodes {
            let total = total_nodes(self);
            c.ensure(
                declared == total,
                "declared_total_nodes",
                format!("declared {declared} nodes but partitions sum to {total}"),
            );
        }

        self.check_link_labels(&mut c);

        if let Some(f) = &self.fabric {
            f.validate("fabric", self, &mut c);
        }
        if let Some(s) = &self.storage {
            s.validate("storage", &mut c);
        }
        if let Some(f) = &self.facility {
            f.validate("facility", &mut c);
        }
        if let Some(m) = &self.measurements {
            m.validate("measurements", &names, &mut c);
        }
        c.violations
    }

    /// A link label must mean the same rate everywhere in one file.
    fn check_link_labels(&self, c: &mut Checker) {
        let mut seen: BTreeMap<&str, f64> = BTreeMap::new();
        let mut rates: Vec<(String, &LinkRate)> = Vec::new();
        for (i, p) in self.partitions.iter().enumerate() {
            if let Some(l) = &p.link {
                rates.push((format!("partitions[{i}].link.rate"), &l.rate));
            }
        }
        if let Some(f) = &self.fabric {
            rates.push(("fabric.port_rate".into(), &f.port_rate));
            for (i, a) in f.endpoint_attachments.iter().enumerate() {
                rates.push((format!("fabric.endpoint_attachments[{i}].rate"), &a.rate));
            }
            for (i, a) in f.auxiliary_endpoints.iter().enumerate() {
                rates.push((format!("fabric.auxiliary_endpoints[{i}].rate"), &a.rate));
            }
        }
        for (path, rate) in rates {
            match seen.get(rate.label.as_str()) {
                Some(&g) if g != rate.gbit_s => c.fail(
                    path,
                    format!(
                        "`{}` is {} Gbit/s here but {g} Gbit/s elsewhere",
                        rate.label, rate.gbit_s
                    ),
                ),
                Some(_) => {}
                None => {
                    seen.insert(&rate.label, rate.gbit_s);
                }
            }
        }
    }
}
