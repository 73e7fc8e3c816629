//! Two-level fat-tree fabric analysis.
//!
//! Leaves attach endpoints and connect to every spine with
//! `uplinks_per_leaf_per_spine` ports. Endpoint links slower than the
//! switch port rate share a port through splitter cables, so port usage
//! is tracked in quarter ports and rounded up per blade group.

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{positive, AnalysisError};
use crate::model::check::{index, join, Checker};
use crate::model::{ClusterSpec, LinkScope, Partition};
use crate::perf::{efficiency, EfficiencyResult};
use crate::units::gbit_to_gbyte;

/// Quarter ports per switch port.
const PORT_SPLIT: u64 = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct LinkRate {
    pub label: String,
    pub gbit_s: f64,
}

impl LinkRate {
    pub fn new(label: impl Into<String>, gbit_s: f64) -> Self {
        Self {
            label: label.into(),
            gbit_s,
        }
    }

    pub(crate) fn validate(&self, path: &str, c: &mut Checker) {
        c.nonempty(path, "label", &self.label);
        c.positive(path, "gbit_s", self.gbit_s);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct FabricSpec {
    pub spine_count: u32,
    pub leaf_count: u32,
    /// Ports per switch, leaves and spines alike.
    pub switch_radix: u32,
    pub port_rate: LinkRate,
    pub uplinks_per_leaf_per_spine: u32,
    /// Endpoint ports per leaf; defaults to whatever the uplinks leave free.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub downlink_ports_per_leaf: Option<u32>,
    #[serde(default)]
    pub endpoint_attachments: Vec<EndpointAttachment>,
    /// Storage, login or admin endpoints. Counted only when declared.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub auxiliary_endpoints: Vec<AuxiliaryEndpoint>,
    /// Blocking factor as quoted by the operator, kept for display.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nominal_blocking: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct EndpointAttachment {
    pub partition: String,
    pub blades: u32,
    pub links_per_blade: u32,
    pub rate: LinkRate,
    #[serde(default)]
    pub shared_io: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct AuxiliaryEndpoint {
    pub role: String,
    pub count: u32,
    pub links_per_endpoint: u32,
    pub rate: LinkRate,
}

impl FabricSpec {
    pub fn uplink_ports_per_leaf(&self) -> u32 {
        self.spine_count * self.uplinks_per_leaf_per_spine
    }

    pub fn spine_downlink_ports(&self) -> u32 {
        self.leaf_count * self.uplinks_per_leaf_per_spine
    }

    pub fn downlink_budget_per_leaf(&self) -> u32 {
        self.downlink_ports_per_leaf
            .unwrap_or_else(|| self.switch_radix.saturating_sub(self.uplink_ports_per_leaf()))
    }

    pub fn uplink_gbit_s_per_leaf(&self) -> f64 {
        f64::from(self.uplink_ports_per_leaf()) * self.port_rate.gbit_s
    }

    fn groups(&self) -> Vec<EndpointGroup> {
        let attached = self.endpoint_attachments.iter().map(|a| EndpointGroup {
            name: a.partition.clone(),
            blades: a.blades,
            links_per_blade: a.links_per_blade,
            rate_gbit_s: a.rate.gbit_s,
        });
        let aux = self.auxiliary_endpoints.iter().map(|a| EndpointGroup {
            name: a.role.clone(),
            blades: a.count,
            links_per_blade: a.links_per_endpoint,
            rate_gbit_s: a.rate.gbit_s,
        });
        attached.chain(aux).collect()
    }

    /// Structural invariants that hold independent of endpoint placement.
    pub(crate) fn validate(&self, path: &str, cluster: &ClusterSpec, c: &mut Checker) {
        c.positive_int(path, "spine_count", self.spine_count.into());
        c.positive_int(path, "leaf_count", self.leaf_count.into());
        c.positive_int(path, "switch_radix", self.switch_radix.into());
        c.positive_int(
            path,
            "uplinks_per_leaf_per_spine",
            self.uplinks_per_leaf_per_spine.into(),
        );
        self.port_rate.validate(&join(path, "port_rate"), c);
        let up = self.uplink_ports_per_leaf();
        c.ensure(
            up <= self.switch_radix,
            join(path, "uplinks_per_leaf_per_spine"),
            format!("{up} uplink ports per leaf exceed radix {}", self.switch_radix),
        );
        let spine_down = self.spine_downlink_ports();
        c.ensure(
            spine_down <= self.switch_radix,
            join(path, "leaf_count"),
            format!(
                "{spine_down} downlink ports per spine exceed radix {}",
                self.switch_radix
            ),
        );
        if let Some(d) = self.downlink_ports_per_leaf {
            c.ensure(
                d + up <= self.switch_radix,
                join(path, "downlink_ports_per_leaf"),
                format!("{d} downlink + {up} uplink ports exceed radix {}", self.switch_radix),
            );
        }
        for (i, a) in self.endpoint_attachments.iter().enumerate() {
            let p = index(path, "endpoint_attachments", i);
            c.positive_int(&p, "blades", a.blades.into());
            c.positive_int(&p, "links_per_blade", a.links_per_blade.into());
            a.rate.validate(&join(&p, "rate"), c);
            match cluster.partition(&a.partition) {
                None => c.fail(join(&p, "partition"), format!("no partition named `{}`", a.partition)),
                Some(part) => check_attachment(a, part, &p, c),
            }
        }
        for (i, a) in self.auxiliary_endpoints.iter().enumerate() {
            let p = index(path, "auxiliary_endpoints", i);
            c.positive_int(&p, "count", a.count.into());
            c.positive_int(&p, "links_per_endpoint", a.links_per_endpoint.into());
            a.rate.validate(&join(&p, "rate"), c);
        }
    }
}

/// The fabric's view of a partition must agree with the partition's own link.
fn check_attachment(a: &EndpointAttachment, part: &Partition, path: &str, c: &mut Checker) {
    c.ensure(
        a.blades == part.blade_count(),
        join(path, "blades"),
        format!(
            "partition `{}` has {} blades, fabric attaches {}",
            part.name,
            part.blade_count(),
            a.blades
        ),
    );
    if let Some(link) = &part.link {
        let per_blade = match link.scope {
            LinkScope::Blade => link.links,
            LinkScope::Node => link.links * part.nodes_per_blade,
        };
        c.ensure(
            per_blade == a.links_per_blade && link.rate.gbit_s == a.rate.gbit_s,
            join(path, "links_per_blade"),
            format!(
                "partition `{}` declares {per_blade} x {} Gbit/s per blade, fabric attaches {} x {}",
                part.name, link.rate.gbit_s, a.links_per_blade, a.rate.gbit_s
            ),
        );
        c.ensure(
            link.shared_io == a.shared_io,
            join(path, "shared_io"),
            "shared_io disagrees with the partition link",
        );
    }
}

#[derive(Debug, Clone, PartialEq)]
struct EndpointGroup {
    name: String,
    blades: u32,
    links_per_blade: u32,
    rate_gbit_s: f64,
}

impl EndpointGroup {
    fn quarters_per_blade(&self, port_rate: f64) -> u64 {
        let per_link = (PORT_SPLIT as f64 * self.rate_gbit_s / port_rate).ceil() as u64;
        per_link.max(1) * u64::from(self.links_per_blade)
    }
}

/// Switch ports needed by `blades` blades of one group.
fn ports_for(quarters_per_blade: u64, blades: u64) -> u64 {
    (quarters_per_blade * blades).div_ceil(PORT_SPLIT)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupDemand {
    pub name: String,
    pub blades: u32,
    pub links_per_blade: u32,
    pub rate_gbit_s: f64,
    pub attached_gbit_s: f64,
    /// Whole switch ports after splitting.
    pub ports: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PortUsage {
    pub switch: String,
    pub used: u64,
    pub free: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FabricReport {
    pub uplink_ports_per_leaf: u32,
    pub downlink_budget_per_leaf: u32,
    pub uplink_bw_per_leaf_gbit_s: f64,
    pub downlink_bw_per_leaf_budget_gbit_s: f64,
    pub attached_downlink_gbit_s: f64,
    pub total_uplink_gbit_s: f64,
    pub blocking_port_budget: f64,
    pub blocking_attached: f64,
    pub bisection_gbit_s: f64,
    pub demand_ports: u64,
    pub available_ports: u64,
    pub groups: Vec<GroupDemand>,
    /// Per-leaf usage under round-robin blade placement; an upper-bound view.
    pub leaves: Vec<PortUsage>,
    pub spines: Vec<PortUsage>,
    pub violations: Vec<String>,
}

impl FabricReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Port budgets, blocking and bisection for `f` attached to `cluster`.
pub fn validate_fabric(f: &FabricSpec, cluster: &ClusterSpec) -> Result<FabricReport, AnalysisError> {
    for a in &f.endpoint_attachments {
        if cluster.partition(&a.partition).is_none() {
            return Err(AnalysisError::UnknownPartition(a.partition.clone()));
        }
    }
    positive("port_rate", f.port_rate.gbit_s)?;
    if f.leaf_count == 0 {
        return Err(AnalysisError::NonPositive {
            name: "leaf_count",
            value: 0.0,
        });
    }

    let radix = u64::from(f.switch_radix);
    let up = u64::from(f.uplink_ports_per_leaf());
    let budget = u64::from(f.downlink_budget_per_leaf());
    let mut violations = Vec::new();

    if up > radix {
        violations.push(format!("leaf uplinks ({up}) exceed switch radix ({radix})"));
    }
    if up + budget > radix {
        violations.push(format!(
            "leaf downlink budget ({budget}) plus uplinks ({up}) exceed switch radix ({radix})"
        ));
    }
    let spine_used = u64::from(f.spine_downlink_ports());
    if spine_used > radix {
        violations.push(format!("spine downlinks ({spine_used}) exceed switch radix ({radix})"));
    }

    let groups = f.groups();
    let demand: Vec<GroupDemand> = groups
        .iter()
        .map(|g| GroupDemand {
            name: g.name.clone(),
            blades: g.blades,
            links_per_blade: g.links_per_blade,
            rate_gbit_s: g.rate_gbit_s,
            attached_gbit_s: f64::from(g.blades) * f64::from(g.links_per_blade) * g.rate_gbit_s,
            ports: ports_for(g.quarters_per_blade(f.port_rate.gbit_s), g.blades.into()),
        })
        .collect();
    let demand_ports: u64 = demand.iter().map(|g| g.ports).sum();
    let available_ports = u64::from(f.leaf_count) * budget;
    if demand_ports > available_ports {
        violations.push(format!(
            "endpoints need {demand_ports} ports but leaves offer {available_ports}"
        ));
    }

    let leaves = round_robin_leaf_usage(f, &groups);
    let leaves: Vec<PortUsage> = leaves
        .into_iter()
        .enumerate()
        .map(|(i, used)| {
            if used + up > radix {
                violations.push(format!(
                    "leaf {i}: {used} downlink + {up} uplink ports exceed radix {radix}"
                ));
            } else if used > budget {
                violations.push(format!("leaf {i}: {used} downlink ports exceed budget {budget}"));
            }
            PortUsage {
                switch: format!("leaf {i}"),
                used: used + up,
                free: radix as i64 - (used + up) as i64,
            }
        })
        .collect();
    let spines = (0..f.spine_count)
        .map(|i| PortUsage {
            switch: format!("spine {i}"),
            used: spine_used,
            free: radix as i64 - spine_used as i64,
        })
        .collect();

    let attached: f64 = demand.iter().map(|g| g.attached_gbit_s).sum();
    let total_uplink = f64::from(f.leaf_count) * f.uplink_gbit_s_per_leaf();
    Ok(FabricReport {
        uplink_ports_per_leaf: f.uplink_ports_per_leaf(),
        downlink_budget_per_leaf: f.downlink_budget_per_leaf(),
        uplink_bw_per_leaf_gbit_s: f.uplink_gbit_s_per_leaf(),
        downlink_bw_per_leaf_budget_gbit_s: budget as f64 * f.port_rate.gbit_s,
        attached_downlink_gbit_s: attached,
        total_uplink_gbit_s: total_uplink,
        blocking_port_budget: blocking_factor(f, cluster, BlockingBasis::PortBudget)?,
        blocking_attached: blocking_factor(f, cluster, BlockingBasis::Attached)?,
        bisection_gbit_s: bisection_bandwidth(f),
        demand_ports,
        available_ports,
        groups: demand,
        leaves,
        spines,
        violations,
    })
}

/// Blades dealt to leaves in turn, continuing across groups.
fn round_robin_leaf_usage(f: &FabricSpec, groups: &[EndpointGroup]) -> Vec<u64> {
    let leaves = f.leaf_count as usize;
    let mut used = vec![0u64; leaves];
    let mut next = 0usize;
    for g in groups {
        let mut per_leaf = vec![0u64; leaves];
        for _ in 0..g.blades {
            per_leaf[next % leaves] += 1;
            next += 1;
        }
        let q = g.quarters_per_blade(f.port_rate.gbit_s);
        for (total, blades) in used.iter_mut().zip(per_leaf) {
            *total += ports_for(q, blades);
        }
    }
    used
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockingBasis {
    /// Downlink port budget against uplink ports, per leaf.
    PortBudget,
    /// Bandwidth actually attached against all uplink bandwidth.
    Attached,
}

pub fn blocking_factor(f: &FabricSpec, cluster: &ClusterSpec, basis: BlockingBasis) -> Result<f64, AnalysisError> {
    let uplink = f.uplink_gbit_s_per_leaf();
    if uplink.is_nan() || uplink <= 0.0 {
        return Err(AnalysisError::NonPositive {
            name: "uplink bandwidth",
            value: uplink,
        });
    }
    match basis {
        BlockingBasis::PortBudget => Ok(f64::from(f.downlink_budget_per_leaf()) * f.port_rate.gbit_s / uplink),
        BlockingBasis::Attached => {
            for a in &f.endpoint_attachments {
                if cluster.partition(&a.partition).is_none() {
                    return Err(AnalysisError::UnknownPartition(a.partition.clone()));
                }
            }
            let attached: f64 = f
                .groups()
                .iter()
                .map(|g| f64::from(g.blades) * f64::from(g.links_per_blade) * g.rate_gbit_s)
                .sum();
            Ok(attached / (f64::from(f.leaf_count) * uplink))
        }
    }
}

/// Half the total leaf-to-spine bandwidth.
pub fn bisection_bandwidth(f: &FabricSpec) -> f64 {
    let links = f64::from(f.leaf_count) * f64::from(f.spine_count) * f64::from(f.uplinks_per_leaf_per_spine);
    links * f.port_rate.gbit_s / 2.0
}

/// Link hops between endpoints on two leaves.
pub fn hop_count(f: &FabricSpec, src_leaf: usize, dst_leaf: usize) -> Result<u32, AnalysisError> {
    let len = f.leaf_count as usize;
    for index in [src_leaf, dst_leaf] {
        if index >= len {
            return Err(AnalysisError::IndexOutOfRange { index, len });
        }
    }
    Ok(if src_leaf == dst_leaf { 2 } else { 4 })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectiveLink {
    /// Rate a node can always count on.
    pub guaranteed_gbit_s: f64,
    /// Rate a node reaches when its blade partner is idle.
    pub peak_gbit_s: f64,
    pub note: String,
}

pub fn node_effective_link(p: &Partition) -> Result<EffectiveLink, AnalysisError> {
    let link = p
        .link
        .as_ref()
        .ok_or_else(|| AnalysisError::Missing(format!("link spec for partition `{}`", p.name)))?;
    let total = link.total_gbit_s();
    let per_blade = p.nodes_per_blade.max(1);
    Ok(match link.scope {
        LinkScope::Node => EffectiveLink {
            guaranteed_gbit_s: total,
            peak_gbit_s: total,
            note: format!("{} x {} per node", link.links, link.rate.label),
        },
        LinkScope::Blade if per_blade == 1 => EffectiveLink {
            guaranteed_gbit_s: total,
            peak_gbit_s: total,
            note: format!("{} x {} per single-node blade", link.links, link.rate.label),
        },
        LinkScope::Blade if link.shared_io => EffectiveLink {
            guaranteed_gbit_s: total / f64::from(per_blade),
            peak_gbit_s: total,
            note: format!(
                "{} x {} shared by {per_blade} nodes; full rate only while the partner is idle",
                link.links, link.rate.label
            ),
        },
        LinkScope::Blade => EffectiveLink {
            guaranteed_gbit_s: total / f64::from(per_blade),
            peak_gbit_s: total / f64::from(per_blade),
            note: format!("{} x {} split across {per_blade} nodes", link.links, link.rate.label),
        },
    })
}

/// Measured bidirectional GB/s against twice the one-way link rate.
pub fn link_utilization(measured_bidir_gb_s: f64, node_rate_gbit_s: f64) -> Result<EfficiencyResult, AnalysisError> {
    positive("measured_bidir_gb_s", measured_bidir_gb_s)?;
    positive("node_rate_gbit_s", node_rate_gbit_s)?;
    efficiency(measured_bidir_gb_s, 2.0 * gbit_to_gbyte(node_rate_gbit_s))
}
