//! Peak-performance and efficiency arithmetic.
//!
//! Everything here is a pure function of its arguments. Results keep the
//! inputs they were computed from so a report can be rechecked by hand.

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{positive, AnalysisError};
use crate::model::{
    AcceleratorSpec, CpuSpec, DdrConfig, FpgaResources, HbmConfig, MemoryConfig, Overhead, VectorVariant,
};

/// Inputs of a peak-FLOPS estimate, echoed back for recomputation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeakInputs {
    pub sockets: u32,
    pub cores_per_socket: u32,
    pub frequency_ghz: f64,
    pub execution_units: u32,
    pub elements_per_vector: u32,
    pub operations_per_element: u32,
}

impl PeakInputs {
    pub fn total_cores(&self) -> u64 {
        u64::from(self.sockets) * u64::from(self.cores_per_socket)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeakFlopsResult {
    pub variant_name: String,
    /// Per node.
    pub tflops: f64,
    pub inputs: PeakInputs,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EfficiencyResult {
    pub measured: f64,
    pub theoretical: f64,
    pub fraction: f64,
    pub percent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    HigherIsBetter,
    LowerIsBetter,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpeedupResult {
    pub baseline: f64,
    pub candidate: f64,
    pub factor: f64,
    pub orientation: Orientation,
}

/// sockets x cores x GHz x units x elements x ops, in TFLOP/s per node.
pub fn peak_flops(
    cpu: &CpuSpec,
    variant: &VectorVariant,
    frequency_ghz: f64,
) -> Result<PeakFlopsResult, AnalysisError> {
    positive("frequency_ghz", frequency_ghz)?;
    for (name, v) in [
        ("sockets_per_node", cpu.sockets_per_node),
        ("cores_per_socket", cpu.cores_per_socket),
        ("execution_units", variant.execution_units),
        ("elements_per_vector", variant.elements_per_vector),
        ("operations_per_element", variant.operations_per_element),
    ] {
        if v == 0 {
            return Err(AnalysisError::NonPositive { name, value: 0.0 });
        }
    }
    let flops_per_cycle = cpu.cores_per_node() * variant.flops_per_cycle();
    Ok(PeakFlopsResult {
        variant_name: variant.name.clone(),
        tflops: flops_per_cycle as f64 * frequency_ghz / 1000.0,
        inputs: PeakInputs {
            sockets: cpu.sockets_per_node,
            cores_per_socket: cpu.cores_per_socket,
            frequency_ghz,
            execution_units: variant.execution_units,
            elements_per_vector: variant.elements_per_vector,
            operations_per_element: variant.operations_per_element,
        },
    })
}

/// Measured TFLOP/s against the peak at the frequency observed during the run.
pub fn flops_efficiency(
    measured_tflops: f64,
    cpu: &CpuSpec,
    variant: &VectorVariant,
    observed_frequency_ghz: f64,
) -> Result<EfficiencyResult, AnalysisError> {
    positive("measured_tflops", measured_tflops)?;
    let peak = peak_flops(cpu, variant, observed_frequency_ghz)?;
    efficiency(measured_tflops, peak.tflops)
}

/// measured / theoretical, for any pair in the same unit.
pub fn efficiency(measured: f64, theoretical: f64) -> Result<EfficiencyResult, AnalysisError> {
    positive("measured", measured)?;
    positive("theoretical", theoretical)?;
    let fraction = measured / theoretical;
    Ok(EfficiencyResult {
        measured,
        theoretical,
        fraction,
        percent: 100.0 * fraction,
    })
}

pub fn bandwidth_efficiency(measured_gb_s: f64, theoretical_gb_s: f64) -> Result<EfficiencyResult, AnalysisError> {
    efficiency(measured_gb_s, theoretical_gb_s)
}

/// sockets x channels x GT/s x bytes per transfer, in GB/s.
pub fn peak_memory_bandwidth(mem: &MemoryConfig, sockets: u32) -> f64 {
    let lanes = u64::from(sockets) * u64::from(mem.channels_per_socket) * u64::from(mem.bytes_per_transfer);
    // Work in MT/s so common rates multiply exactly; the final division
    // is then correctly rounded.
    lanes as f64 * (mem.transfer_rate_gt_per_s * 1000.0) / 1000.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HbmBandwidth {
    pub bits_per_transaction: u64,
    pub bytes_per_transaction: f64,
    pub mb_s: f64,
    pub gb_s: f64,
}

pub fn hbm_peak_bandwidth(h: &HbmConfig) -> HbmBandwidth {
    let bits = u64::from(h.stacks)
        * u64::from(h.channels_per_stack)
        * u64::from(h.pseudo_channels_per_channel)
        * u64::from(h.bits_per_pseudo_channel);
    let bytes = bits as f64 / 8.0;
    let mb_s = h.controller_clock_mhz * f64::from(h.data_rate_multiplier) * bytes;
    HbmBandwidth {
        bits_per_transaction: bits,
        bytes_per_transaction: bytes,
        mb_s,
        gb_s: mb_s / 1000.0,
    }
}

/// Controller clock (MHz) that yields `gb_s` with the layout of `h`.
pub fn hbm_clock_for_bandwidth(h: &HbmConfig, gb_s: f64) -> Result<f64, AnalysisError> {
    positive("gb_s", gb_s)?;
    let per_mhz = hbm_peak_bandwidth(&HbmConfig {
        controller_clock_mhz: 1.0,
        ..*h
    })
    .mb_s;
    positive("bytes per transaction", per_mhz)?;
    Ok(gb_s * 1000.0 / per_mhz)
}

/// One DIMM channel: MT/s x bytes per transfer, in GB/s.
pub fn ddr_dimm_bandwidth(transfer_rate_mt_s: f64, bytes_per_transfer: u32) -> Result<f64, AnalysisError> {
    positive("transfer_rate_mt_s", transfer_rate_mt_s)?;
    if bytes_per_transfer == 0 {
        return Err(AnalysisError::NonPositive {
            name: "bytes_per_transfer",
            value: 0.0,
        });
    }
    Ok(transfer_rate_mt_s * f64::from(bytes_per_transfer) / 1000.0)
}

/// All channels of a DDR configuration.
pub fn ddr_bandwidth(cfg: &DdrConfig) -> Result<f64, AnalysisError> {
    Ok(f64::from(cfg.channels) * ddr_dimm_bandwidth(cfg.transfer_rate_mt_s, cfg.bytes_per_transfer)?)
}

pub const XBTEST_MODES: [&str; 4] = [
    "write only",
    "read only",
    "alternating write/read",
    "simultaneous write/read",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeBandwidth {
    pub mode: u8,
    pub label: &'static str,
    pub fraction: f64,
    pub gb_s: f64,
}

/// Bandwidth implied by each memory-test mode's fraction of peak.
pub fn xbtest_mode_report(peak_gb_s: f64, mode_fractions: &[f64]) -> Result<Vec<ModeBandwidth>, AnalysisError> {
    positive("peak_gb_s", peak_gb_s)?;
    if mode_fractions.len() != XBTEST_MODES.len() {
        return Err(AnalysisError::WrongArity {
            expected: XBTEST_MODES.len(),
            got: mode_fractions.len(),
        });
    }
    mode_fractions
        .iter()
        .zip(XBTEST_MODES)
        .enumerate()
        .map(|(i, (&fraction, label))| {
            if !(fraction > 0.0 && fraction <= 1.0) {
                return Err(AnalysisError::OutOfRange {
                    name: "mode fraction",
                    range: "(0, 1]",
                    value: fraction,
                });
            }
            Ok(ModeBandwidth {
                mode: i as u8 + 1,
                label,
                fraction,
                gb_s: fraction * peak_gb_s,
            })
        })
        .collect()
}

pub fn cache_latency_ns(cycles: f64, frequency_ghz: f64) -> Result<f64, AnalysisError> {
    positive("cycles", cycles)?;
    positive("frequency_ghz", frequency_ghz)?;
    Ok(cycles / frequency_ghz)
}

pub fn cache_latency_cycles(ns: f64, frequency_ghz: f64) -> Result<f64, AnalysisError> {
    positive("ns", ns)?;
    positive("frequency_ghz", frequency_ghz)?;
    Ok(ns * frequency_ghz)
}

fn throughput(acc: &AcceleratorSpec, precision: &str) -> Result<f64, AnalysisError> {
    acc.throughput_table
        .get(precision)
        .copied()
        .ok_or_else(|| AnalysisError::UnknownPrecision(precision.to_string()))
}

/// `count` cards at one precision, TFLOP/s.
pub fn gpu_node_peak(acc: &AcceleratorSpec, count: u32, precision: &str) -> Result<f64, AnalysisError> {
    if count == 0 {
        return Err(AnalysisError::NonPositive {
            name: "count",
            value: 0.0,
        });
    }
    Ok(f64::from(count) * throughput(acc, precision)?)
}

/// GFLOP/s per watt of TDP.
pub fn perf_per_watt(acc: &AcceleratorSpec, precision: &str) -> Result<f64, AnalysisError> {
    let tflops = throughput(acc, precision)?;
    positive("tdp_watts", acc.tdp_watts)?;
    Ok(1000.0 * tflops / acc.tdp_watts)
}

pub fn speedup(baseline: f64, candidate: f64, orientation: Orientation) -> Result<SpeedupResult, AnalysisError> {
    positive("baseline", baseline)?;
    positive("candidate", candidate)?;
    let factor = match orientation {
        Orientation::HigherIsBetter => candidate / baseline,
        Orientation::LowerIsBetter => baseline / candidate,
    };
    Ok(SpeedupResult {
        baseline,
        candidate,
        factor,
        orientation,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub low: f64,
    pub high: f64,
}

/// Element-wise `a / b` for the compared FPGA resources.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResourceRatios {
    /// Full 6-input LUT basis.
    pub luts: f64,
    /// Against `b`'s packed-LUT range when it has one: `[a/max, a/min]`.
    pub luts_packed: Option<Interval>,
    pub dsp_blocks: f64,
    pub ram_kibit: f64,
}

pub fn fpga_resource_ratio(a: &FpgaResources, b: &FpgaResources) -> Result<ResourceRatios, AnalysisError> {
    let ratio = |what: &str, x: u64, y: u64| {
        if x == 0 || y == 0 {
            Err(AnalysisError::Missing(format!("{what} in one of the compared records")))
        } else {
            Ok(x as f64 / y as f64)
        }
    };
    let luts = ratio("luts", a.luts, b.luts)?;
    let luts_packed = b
        .luts_packed_max
        .map(|max| -> Result<Interval, AnalysisError> {
            Ok(Interval {
                low: ratio("luts_packed_max", a.luts, max)?,
                high: luts,
            })
        })
        .transpose()?;
    Ok(ResourceRatios {
        luts,
        luts_packed,
        dsp_blocks: ratio("dsp_blocks", a.dsp_blocks.count, b.dsp_blocks.count)?,
        ram_kibit: ratio("ram_blocks", a.total_ram_kibit(), b.total_ram_kibit())?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResourceClass {
    Logic,
    Dsp,
    Bram,
}

/// What remains for user kernels after the BSP takes its share.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AvailableResource {
    pub class: ResourceClass,
    pub total: u64,
    pub overhead: Overhead,
    /// Rounded down. For an upper-bound overhead this is the worst case.
    pub available_min: u64,
    pub available_max: u64,
}

pub fn bsp_available_resources(r: &FpgaResources) -> Result<Vec<AvailableResource>, AnalysisError> {
    let o = r
        .bsp_overhead
        .as_ref()
        .ok_or_else(|| AnalysisError::Missing("bsp_overhead".into()))?;
    let remaining = |total: u64, f: f64| ((total as f64) * (1.0 - f) + 1e-9).floor() as u64;
    let classes = [
        (ResourceClass::Logic, r.luts, o.logic),
        (ResourceClass::Dsp, r.dsp_blocks.count, o.dsp),
        (ResourceClass::Bram, r.bram_blocks(), o.bram),
    ];
    classes
        .into_iter()
        .map(|(class, total, overhead)| {
            let f = overhead.fraction();
            if !(0.0..=1.0).contains(&f) {
                return Err(AnalysisError::OutOfRange {
                    name: "bsp overhead",
                    range: "[0, 1]",
                    value: f,
                });
            }
            let worst = remaining(total, f);
            Ok(AvailableResource {
                class,
                total,
                overhead,
                available_min: worst,
                available_max: if overhead.is_bound() { total } else { worst },
            })
        })
        .collect()
}
