//! Processor, memory and accelerator records.

use std::collections::BTreeMap;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::check::{index, join, Checker};

/// One CPU model as installed in a node.
///
/// Frequencies and TDP are optional because some host CPUs are only
/// named, never characterised, in the available sources.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct CpuSpec {
    pub model: String,
    pub sockets_per_node: u32,
    pub cores_per_socket: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_frequency_ghz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boost_frequency_ghz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tdp_watts_per_socket: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub caches: Vec<CacheLevel>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vector_variants: Vec<VectorVariant>,
}

impl CpuSpec {
    /// A bare CPU with no frequencies, caches or variants.
    pub fn new(model: impl Into<String>, sockets_per_node: u32, cores_per_socket: u32) -> Self {
        Self {
            model: model.into(),
            sockets_per_node,
            cores_per_socket,
            base_frequency_ghz: None,
            boost_frequency_ghz: None,
            tdp_watts_per_socket: None,
            caches: Vec::new(),
            vector_variants: Vec::new(),
        }
    }

    pub fn cores_per_node(&self) -> u64 {
        u64::from(self.sockets_per_node) * u64::from(self.cores_per_socket)
    }

    pub fn variant(&self, name: &str) -> Option<&VectorVariant> {
        self.vector_variants.iter().find(|v| v.name == name)
    }

    pub(crate) fn validate(&self, path: &str, c: &mut Checker) {
        c.nonempty(path, "model", &self.model);
        c.positive_int(path, "sockets_per_node", self.sockets_per_node.into());
        c.positive_int(path, "cores_per_socket", self.cores_per_socket.into());
        if let Some(f) = self.base_frequency_ghz {
            c.positive(path, "base_frequency_ghz", f);
        }
        if let Some(f) = self.boost_frequency_ghz {
            c.positive(path, "boost_frequency_ghz", f);
        }
        if let (Some(base), Some(boost)) = (self.base_frequency_ghz, self.boost_frequency_ghz) {
            c.ensure(
                base <= boost,
                join(path, "base_frequency_ghz"),
                format!("base frequency {base} GHz exceeds boost frequency {boost} GHz"),
            );
        }
        if let Some(t) = self.tdp_watts_per_socket {
            c.positive(path, "tdp_watts_per_socket", t);
        }
        for (i, cache) in self.caches.iter().enumerate() {
            cache.validate(&index(path, "caches", i), c);
        }
        for (i, v) in self.vector_variants.iter().enumerate() {
            let p = index(path, "vector_variants", i);
            v.validate(&p, c);
            if self.vector_variants[..i].iter().any(|o| o.name == v.name) {
                c.fail(join(&p, "name"), format!("duplicate variant `{}`", v.name));
            }
        }
    }
}

/// An instruction mix used for peak estimation, e.g. "AVX-512 FMA+ADD".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct VectorVariant {
    pub name: String,
    pub execution_units: u32,
    pub elements_per_vector: u32,
    pub operations_per_element: u32,
}

impl VectorVariant {
    pub fn new(name: impl Into<String>, units: u32, elements: u32, ops: u32) -> Self {
        Self {
            name: name.into(),
            execution_units: units,
            elements_per_vector: elements,
            operations_per_element: ops,
        }
    }

    /// Floating-point operations per core per cycle.
    pub fn flops_per_cycle(&self) -> u64 {
        u64::from(self.execution_units) * u64::from(self.elements_per_vector) * u64::from(self.operations_per_element)
    }

    fn validate(&self, path: &str, c: &mut Checker) {
        c.nonempty(path, "name", &self.name);
        c.positive_int(path, "execution_units", self.execution_units.into());
        c.positive_int(path, "elements_per_vector", self.elements_per_vector.into());
        c.positive_int(path, "operations_per_element", self.operations_per_element.into());
    }
}

/// Inclusive range of cycle counts, e.g. "7-18 cycles".
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct CycleRange {
    pub min: f64,
    pub max: f64,
}

impl CycleRange {
    pub fn exact(v: f64) -> Self {
        Self { min: v, max: v }
    }

    fn validate(&self, path: &str, c: &mut Checker) {
        c.positive(path, "min", self.min);
        c.positive(path, "max", self.max);
        c.ensure(self.min <= self.max, join(path, "min"), "min exceeds max");
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct CacheLevel {
    /// L1I, L1D, L2 or L3.
    pub level: String,
    pub size_bytes: u64,
    pub sharing_cores: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub associativity: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latency_cycles_documented: Option<CycleRange>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latency_cycles_measured: Option<CycleRange>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CacheLevel {
    fn validate(&self, path: &str, c: &mut Checker) {
        c.nonempty(path, "level", &self.level);
        c.positive_int(path, "size_bytes", self.size_bytes);
        c.positive_int(path, "sharing_cores", self.sharing_cores.into());
        if let Some(a) = self.associativity {
            c.positive_int(path, "associativity", a.into());
        }
        if let Some(r) = &self.latency_cycles_documented {
            r.validate(&join(path, "latency_cycles_documented"), c);
        }
        if let Some(r) = &self.latency_cycles_measured {
            r.validate(&join(path, "latency_cycles_measured"), c);
        }
    }
}

/// Main memory of one node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct MemoryConfig {
    pub technology: String,
    /// Unset when the source gives the memory layout but not the size.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity_bytes: Option<u64>,
    pub channels_per_socket: u32,
    pub transfer_rate_gt_per_s: f64,
    pub bytes_per_transfer: u32,
    pub numa_mode: String,
}

impl MemoryConfig {
    pub(crate) fn validate(&self, path: &str, c: &mut Checker) {
        c.nonempty(path, "technology", &self.technology);
        if let Some(cap) = self.capacity_bytes {
            c.positive_int(path, "capacity_bytes", cap);
        }
        c.positive_int(path, "channels_per_socket", self.channels_per_socket.into());
        c.positive(path, "transfer_rate_gt_per_s", self.transfer_rate_gt_per_s);
        c.positive_int(path, "bytes_per_transfer", self.bytes_per_transfer.into());
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum AcceleratorKind {
    Gpu,
    Fpga,
}

/// A GPU or FPGA card.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct AcceleratorSpec {
    pub kind: AcceleratorKind,
    pub model: String,
    pub tdp_watts: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub memory_systems: Vec<AcceleratorMemory>,
    /// Precision label to TFLOP/s. GPUs only.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub throughput_table: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fpga_resources: Option<FpgaResources>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub host_interface: Option<HostInterface>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub network_ports: Option<NetworkPorts>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gpu_details: Option<GpuDetails>,
}

impl AcceleratorSpec {
    pub(crate) fn validate(&self, path: &str, c: &mut Checker) {
        c.nonempty(path, "model", &self.model);
        c.positive(path, "tdp_watts", self.tdp_watts);
        for (i, m) in self.memory_systems.iter().enumerate() {
            m.validate(&index(path, "memory_systems", i), c);
        }
        for (label, tflops) in &self.throughput_table {
            if !(tflops.is_finite() && *tflops >= 0.0) {
                c.fail(
                    format!("{}[{label}]", join(path, "throughput_table")),
                    format!("must be a nonnegative number, got {tflops}"),
                );
            }
        }
        match self.kind {
            AcceleratorKind::Gpu => c.ensure(
                !self.throughput_table.is_empty(),
                join(path, "throughput_table"),
                "gpu records need a nonempty throughput table",
            ),
            AcceleratorKind::Fpga => c.ensure(
                self.fpga_resources.is_some(),
                join(path, "fpga_resources"),
                "fpga records need fpga_resources",
            ),
        }
        if let Some(r) = &self.fpga_resources {
            r.validate(&join(path, "fpga_resources"), c);
        }
        if let Some(h) = &self.host_interface {
            c.positive(&join(path, "host_interface"), "bandwidth_gb_s", h.bandwidth_gb_s);
        }
        if let Some(n) = &self.network_ports {
            let p = join(path, "network_ports");
            c.positive_int(&p, "count", n.count.into());
            c.positive(&p, "gbit_s", n.gbit_s);
        }
    }

    pub fn memory(&self, label: &str) -> Option<&AcceleratorMemory> {
        self.memory_systems.iter().find(|m| m.label == label)
    }
}

/// One on-card memory system (HBM stack set, DDR channels, ...).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct AcceleratorMemory {
    pub label: String,
    pub capacity_bytes: u64,
    pub peak_bandwidth_gb_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbm: Option<HbmConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ddr: Option<DdrConfig>,
}

impl AcceleratorMemory {
    fn validate(&self, path: &str, c: &mut Checker) {
        c.nonempty(path, "label", &self.label);
        c.positive_int(path, "capacity_bytes", self.capacity_bytes);
        c.positive(path, "peak_bandwidth_gb_s", self.peak_bandwidth_gb_s);
        if let Some(h) = &self.hbm {
            h.validate(&join(path, "hbm"), c);
        }
        if let Some(d) = &self.ddr {
            let p = join(path, "ddr");
            c.positive(&p, "transfer_rate_mt_s", d.transfer_rate_mt_s);
            c.positive_int(&p, "bytes_per_transfer", d.bytes_per_transfer.into());
            c.positive_int(&p, "channels", d.channels.into());
        }
    }
}

/// HBM controller layout feeding the per-transaction width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct HbmConfig {
    pub stacks: u32,
    pub channels_per_stack: u32,
    pub pseudo_channels_per_channel: u32,
    pub bits_per_pseudo_channel: u32,
    pub controller_clock_mhz: f64,
    /// 2 for double data rate.
    pub data_rate_multiplier: u32,
}

impl HbmConfig {
    fn validate(&self, path: &str, c: &mut Checker) {
        c.positive_int(path, "stacks", self.stacks.into());
        c.positive_int(path, "channels_per_stack", self.channels_per_stack.into());
        c.positive_int(
            path,
            "pseudo_channels_per_channel",
            self.pseudo_channels_per_channel.into(),
        );
        c.positive_int(path, "bits_per_pseudo_channel", self.bits_per_pseudo_channel.into());
        c.positive(path, "controller_clock_mhz", self.controller_clock_mhz);
        c.positive_int(path, "data_rate_multiplier", self.data_rate_multiplier.into());
    }
}

/// DIMM parameters for an on-card DDR memory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct DdrConfig {
    pub transfer_rate_mt_s: f64,
    pub bytes_per_transfer: u32,
    pub channels: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct HostInterface {
    pub generation: String,
    pub bandwidth_gb_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct NetworkPorts {
    pub count: u32,
    pub gbit_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct GpuDetails {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub streaming_multiprocessors: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensor_cores: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub memory_type: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nvlink_bandwidth_gb_s: Option<f64>,
}

/// Programmable-logic resources of an FPGA device.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct FpgaResources {
    /// Full 6-input LUT count.
    pub luts: u64,
    /// Upper LUT count when logic cells can pack two LUTs each.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub luts_packed_max: Option<u64>,
    pub dsp_blocks: DspBlocks,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ram_blocks: Vec<RamBlocks>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bsp_overhead: Option<BspOverhead>,
}

impl FpgaResources {
    pub fn total_ram_kibit(&self) -> u64 {
        self.ram_blocks.iter().map(RamBlocks::capacity_kibit).sum()
    }

    /// Block RAM count, excluding UltraRAM.
    pub fn bram_blocks(&self) -> u64 {
        self.ram_blocks.iter().filter(|b| !b.ultraram).map(|b| b.count).sum()
    }

    fn validate(&self, path: &str, c: &mut Checker) {
        if let Some(max) = self.luts_packed_max {
            c.ensure(
                max >= self.luts,
                join(path, "luts_packed_max"),
                "packed maximum is below the LUT count",
            );
        }
        c.nonempty(&join(path, "dsp_blocks"), "architecture", &self.dsp_blocks.architecture);
        for (i, b) in self.ram_blocks.iter().enumerate() {
            let p = index(path, "ram_blocks", i);
            c.nonempty(&p, "block_kind", &b.block_kind);
            c.positive_int(&p, "kibit_per_block", b.kibit_per_block.into());
        }
        if let Some(o) = &self.bsp_overhead {
            let p = join(path, "bsp_overhead");
            for (name, v) in [("logic", o.logic), ("dsp", o.dsp), ("bram", o.bram)] {
                c.fraction_closed(&p, name, v.fraction());
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct DspBlocks {
    pub count: u64,
    pub architecture: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct RamBlocks {
    pub block_kind: String,
    pub count: u64,
    pub kibit_per_block: u32,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub ultraram: bool,
}

impl RamBlocks {
    pub fn capacity_kibit(&self) -> u64 {
        self.count * u64::from(self.kibit_per_block)
    }
}

/// Share of each resource class reserved by the board support package.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct BspOverhead {
    pub logic: Overhead,
    pub dsp: Overhead,
    pub bram: Overhead,
}

/// A reserved fraction, either exact or an upper bound ("<2%").
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum Overhead {
    Exact(f64),
    AtMost(f64),
}

impl Overhead {
    pub fn fraction(&self) -> f64 {
        match *self {
            Overhead::Exact(f) | Overhead::AtMost(f) => f,
        }
    }

    pub fn is_bound(&self) -> bool {
        matches!(self, Overhead::AtMost(_))
    }
}
