//! Report sections. Each appends findings in a fixed order; `report`
//! runs them all in the order listed in [`crate::SECTIONS`].

use std::path::Path;

use clusterplan::facility::{headroom, it_power_envelope, EnvelopeOptions};
use clusterplan::model::{total_cores, total_nodes, AcceleratorKind, AcceleratorSpec, ClusterSpec, NodeRef};
use clusterplan::perf::{
    bandwidth_efficiency, bsp_available_resources, cache_latency_ns, ddr_bandwidth, flops_efficiency, gpu_node_peak,
    hbm_peak_bandwidth, peak_flops, peak_memory_bandwidth, perf_per_watt, xbtest_mode_report, ResourceClass,
};
use clusterplan::storage::{capacity_summary, load_io500, pool_raw_capacity, Io500Report};
use clusterplan::topology::{link_utilization, node_effective_link, validate_fabric, FabricReport};
use clusterplan::units::{bytes_to_tb, trim_float};

use crate::report::{Output, Table};
use crate::CliError;

pub(crate) fn inventory(out: &mut Output, spec: &ClusterSpec) {
    let r = &mut out.report;
    r.add(
        "inventory.total_nodes",
        total_nodes(spec),
        "nodes",
        "sum of partitions[].node_count",
    );
    r.add(
        "inventory.total_cores",
        total_cores(spec),
        "cores",
        "sum of partitions[].node_count x cpu.sockets_per_node x cpu.cores_per_socket",
    );
    for p in &spec.partitions {
        let prov = format!("partitions[{}]", p.name);
        r.add(
            format!("inventory.{}.nodes", p.name),
            p.node_count,
            "nodes",
            format!("{prov}.node_count"),
        );
        r.add(
            format!("inventory.{}.blades", p.name),
            p.blade_count(),
            "blades",
            format!("{prov}.node_count / nodes_per_blade"),
        );
        r.add(
            format!("inventory.{}.cores", p.name),
            p.cores(),
            "cores",
            format!("{prov}.node_count, {prov}.cpu"),
        );
        if let Some(active) = p.active_nodes {
            r.add(
                format!("inventory.{}.active_nodes", p.name),
                active,
                "nodes",
                format!("{prov}.active_nodes"),
            );
        }
    }
}

/// Table-3 style rows for one node at `frequency` (base when `None`).
pub(crate) fn peak_rows(
    out: &mut Output,
    node: &NodeRef<'_>,
    variant: Option<&str>,
    frequency: Option<f64>,
) -> Result<(), CliError> {
    let cpu = node.cpu;
    let freq = match frequency.or(cpu.base_frequency_ghz) {
        Some(f) => f,
        None => {
            return Err(CliError::Input(format!(
                "node `{}` has no base frequency; pass --frequency",
                node.name
            )))
        }
    };
    let variants: Vec<_> = match variant {
        Some(name) => vec![cpu.variant(name).ok_or_else(|| {
            let known: Vec<&str> = cpu.vector_variants.iter().map(|v| v.name.as_str()).collect();
            CliError::Input(format!(
                "node `{}` has no variant `{name}` (known: {})",
                node.name,
                known.join(", ")
            ))
        })?],
        None => cpu.vector_variants.iter().collect(),
    };
    let mut t = Table::new(
        format!("Theoretical double-precision peak, {} ({})", node.name, cpu.model),
        &[
            "CPU",
            "Cores",
            "Freq. [GHz]",
            "Exec. Units",
            "Ele.",
            "Op.",
            "Performance [TFLOP/s]",
            "Variant",
        ],
    );
    for v in variants {
        let p = peak_flops(cpu, v, freq).map_err(|e| CliError::Input(e.to_string()))?;
        out.report.add(
            format!("cpu.{}.{}.peak_tflops", node.name, v.name),
            p.tflops,
            "TFLOP/s",
            format!(
                "{}.cpu sockets/cores, vector_variants[{}], {} GHz",
                node.name,
                v.name,
                trim_float(freq, 4)
            ),
        );
        t.row(vec![
            cpu.model.clone(),
            p.inputs.total_cores().to_string(),
            format!("{freq:.2}"),
            v.execution_units.to_string(),
            v.elements_per_vector.to_string(),
            v.operations_per_element.to_string(),
            format!("{:.4}", p.tflops),
            v.name.clone(),
        ]);
    }
    out.tables.push(t);
    Ok(())
}

pub(crate) fn cpu_peaks(out: &mut Output, spec: &ClusterSpec) {
    for node in distinct_cpu_nodes(spec) {
        if node.cpu.base_frequency_ghz.is_some() && !node.cpu.vector_variants.is_empty() {
            // Inputs were validated on load, so this cannot fail.
            let _ = peak_rows(out, &node, None, None);
        }
    }
}

/// One node per CPU model, first occurrence wins.
fn distinct_cpu_nodes(spec: &ClusterSpec) -> Vec<NodeRef<'_>> {
    let mut seen: Vec<&str> = Vec::new();
    spec.nodes()
        .into_iter()
        .filter(|n| {
            if seen.contains(&n.cpu.model.as_str()) {
                false
            } else {
                seen.push(&n.cpu.model);
                true
            }
        })
        .collect()
}

pub(crate) fn synthetic_efficiency(out: &mut Output, spec: &ClusterSpec) {
    let runs = &spec.measurements().flops_runs;
    if runs.is_empty() {
        return;
    }
    let mut t = Table::new(
        "Measured FLOPS against peak at the observed clock",
        &[
            "Node",
            "Variant",
            "Freq. [GHz]",
            "Measured [TFLOP/s]",
            "Peak [TFLOP/s]",
            "Efficiency",
        ],
    );
    for (i, run) in runs.iter().enumerate() {
        let Some(node) = spec.node(&run.node) else { continue };
        let Some(variant) = node.cpu.variant(&run.variant) else {
            out.report.violations.push(format!(
                "measurements.flops_runs[{i}]: node `{}` has no variant `{}`",
                run.node, run.variant
            ));
            continue;
        };
        let Ok(e) = flops_efficiency(run.tflops, node.cpu, variant, run.observed_frequency_ghz) else {
            continue;
        };
        let key = format!("efficiency.{}.{}", run.node, run.variant);
        let prov = format!("measurements.flops_runs[{i}], {}.cpu", run.node);
        out.report.add(
            format!("{key}.theoretical_tflops"),
            e.theoretical,
            "TFLOP/s",
            prov.clone(),
        );
        out.report
            .add(format!("{key}.measured_tflops"), e.measured, "TFLOP/s", prov.clone());
        out.report.add(format!("{key}.fraction"), e.fraction, "", prov);
        t.row(vec![
            run.node.clone(),
            run.variant.clone(),
            format!("{:.3}", run.observed_frequency_ghz),
            format!("{:.3}", e.measured),
            format!("{:.3}", e.theoretical),
            format!("{:.1} %", e.percent),
        ]);
    }
    out.tables.push(t);
}

pub(crate) fn memory(out: &mut Output, spec: &ClusterSpec) {
    let mut t = Table::new(
        "Main memory bandwidth",
        &[
            "Node",
            "Type",
            "NUMA",
            "Channels",
            "Transfer rate [GT/s]",
            "Bytes",
            "Peak [GB/s]",
            "Measured [GB/s]",
            "Efficiency",
        ],
    );
    for node in spec.nodes() {
        let m = node.memory;
        let sockets = node.cpu.sockets_per_node;
        let peak = peak_memory_bandwidth(m, sockets);
        let channels = sockets * m.channels_per_socket;
        let runs: Vec<_> = spec
            .measurements()
            .stream_runs
            .iter()
            .enumerate()
            .filter(|(_, r)| r.node == node.name)
            .collect();
        // Partitions sharing a memory configuration add nothing new.
        if runs.is_empty() && node.partition.is_some() && node.name != first_with_memory(spec, &node) {
            continue;
        }
        out.report.add(
            format!("memory.{}.peak_gb_s", node.name),
            peak,
            "GB/s",
            format!(
                "{}.memory channels_per_socket x transfer_rate_gt_per_s x bytes_per_transfer x sockets",
                node.name
            ),
        );
        let row = |numa: &str, measured: String, eff: String| {
            vec![
                node.name.to_string(),
                m.technology.clone(),
                numa.to_string(),
                channels.to_string(),
                trim_float(m.transfer_rate_gt_per_s, 3),
                m.bytes_per_transfer.to_string(),
                format!("{peak:.1}"),
                measured,
                eff,
            ]
        };
        if runs.is_empty() {
            t.row(row(&m.numa_mode, "-".into(), "-".into()));
        }
        for (i, run) in runs {
            let Ok(e) = bandwidth_efficiency(run.gb_s, peak) else {
                continue;
            };
            let key = format!("memory.{}.stream.{}", node.name, run.numa_mode);
            let prov = format!("measurements.stream_runs[{i}]");
            out.report
                .add(format!("{key}.measured_gb_s"), run.gb_s, "GB/s", prov.clone());
            out.report.add(format!("{key}.fraction"), e.fraction, "", prov);
            t.row(row(
                &run.numa_mode,
                format!("{:.1}", run.gb_s),
                format!("{:.3}", e.fraction),
            ));
        }
    }
    out.tables.push(t);
}

fn first_with_memory<'a>(spec: &'a ClusterSpec, node: &NodeRef<'_>) -> &'a str {
    spec.nodes()
        .into_iter()
        .find(|n| n.memory == node.memory && n.cpu.sockets_per_node == node.cpu.sockets_per_node)
        .map(|n| n.name)
        .unwrap_or("")
}

pub(crate) fn caches(out: &mut Output, spec: &ClusterSpec) {
    for node in distinct_cpu_nodes(spec) {
        let Some(freq) = node.cpu.base_frequency_ghz else {
            continue;
        };
        if node.cpu.caches.is_empty() {
            continue;
        }
        let mut t = Table::new(
            format!("Caches of {} at {} GHz", node.cpu.model, trim_float(freq, 3)),
            &[
                "Level",
                "Size [KiB]",
                "Shared by",
                "Ways",
                "Documented [cycles]",
                "Documented [ns]",
                "Measured [cycles]",
                "Measured [ns]",
            ],
        );
        for c in &node.cpu.caches {
            let key = format!("caches.{}.{}", node.name, c.level);
            let prov = format!("{}.cpu.caches[{}]", node.name, c.level);
            out.report
                .add(format!("{key}.size_bytes"), c.size_bytes, "B", prov.clone());
            let mut cells = vec![
                c.level.clone(),
                (c.size_bytes / 1024).to_string(),
                c.sharing_cores.to_string(),
                c.associativity.map_or("-".into(), |a| a.to_string()),
            ];
            for (what, range) in [
                ("documented", c.latency_cycles_documented),
                ("measured", c.latency_cycles_measured),
            ] {
                match range {
                    Some(r) => {
                        let lo = cache_latency_ns(r.min, freq).unwrap_or(f64::NAN);
                        let hi = cache_latency_ns(r.max, freq).unwrap_or(f64::NAN);
                        out.report.add(
                            format!("{key}.{what}_ns_min"),
                            lo,
                            "ns",
                            format!("{prov}, base frequency"),
                        );
                        out.report.add(
                            format!("{key}.{what}_ns_max"),
                            hi,
                            "ns",
                            format!("{prov}, base frequency"),
                        );
                        cells.push(span(r.min, r.max, 0));
                        cells.push(span(lo, hi, 2));
                    }
                    None => cells.extend(["-".to_string(), "-".to_string()]),
                }
            }
            t.row(cells);
        }
        out.tables.push(t);
    }
}

fn span(lo: f64, hi: f64, decimals: usize) -> String {
    if lo == hi {
        trim_float(lo, decimals)
    } else {
        format!("{}-{}", trim_float(lo, decimals), trim_float(hi, decimals))
    }
}

/// Cards per node for accelerators in a partition, none for reference entries.
fn cards_per_node(spec: &ClusterSpec, model: &str) -> Option<u32> {
    spec.partitions
        .iter()
        .flat_map(|p| &p.accelerators)
        .find(|s| s.accelerator.model == model)
        .map(|s| s.count)
}

pub(crate) fn accelerators(out: &mut Output, spec: &ClusterSpec) {
    for acc in spec.accelerators() {
        match acc.kind {
            AcceleratorKind::Gpu => gpu(out, spec, acc),
            AcceleratorKind::Fpga => fpga(out, spec, acc),
        }
    }
}

fn gpu(out: &mut Output, spec: &ClusterSpec, acc: &AcceleratorSpec) {
    let key = format!("accelerators.{}", acc.model);
    let count = cards_per_node(spec, &acc.model);
    for precision in acc.throughput_table.keys() {
        let prov = format!("{}.throughput_table[{precision}], tdp_watts", acc.model);
        if let Ok(ppw) = perf_per_watt(acc, precision) {
            out.report.add(
                format!("{key}.{precision}.gflops_per_watt"),
                ppw,
                "GFLOP/s/W",
                prov.clone(),
            );
        }
        if let Some(n) = count {
            if let Ok(peak) = gpu_node_peak(acc, n, precision) {
                out.report.add(
                    format!("{key}.{precision}.node_tflops"),
                    peak,
                    "TFLOP/s",
                    format!("{prov}, {n} per node"),
                );
            }
        }
    }
}

fn fpga(out: &mut Output, spec: &ClusterSpec, acc: &AcceleratorSpec) {
    let key = format!("accelerators.{}", acc.model);
    for m in &acc.memory_systems {
        let mkey = format!("{key}.{}", m.label);
        let prov = format!("{}.memory_systems[{}]", acc.model, m.label);
        let derived = if let Some(h) = &m.hbm {
            let bw = hbm_peak_bandwidth(h);
            out.report.add(
                format!("{mkey}.bytes_per_transaction"),
                bw.bytes_per_transaction,
                "B",
                format!("{prov}.hbm"),
            );
            out.report.add(
                format!("{mkey}.derived_peak_mb_s"),
                bw.mb_s,
                "MB/s",
                format!("{prov}.hbm"),
            );
            Some(bw.gb_s)
        } else if let Some(d) = &m.ddr {
            ddr_bandwidth(d).ok()
        } else {
            None
        };
        if let Some(gb_s) = derived {
            out.report
                .add(format!("{mkey}.derived_peak_gb_s"), gb_s, "GB/s", prov.clone());
        }
        out.report.add(
            format!("{mkey}.listed_peak_gb_s"),
            m.peak_bandwidth_gb_s,
            "GB/s",
            format!("{prov}.peak_bandwidth_gb_s"),
        );
        let peak = derived.unwrap_or(m.peak_bandwidth_gb_s);
        for (i, x) in spec.measurements().xbtest.iter().enumerate() {
            if x.accelerator != acc.model || x.memory != m.label {
                continue;
            }
            let Ok(modes) = xbtest_mode_report(peak, &x.mode_fractions) else {
                continue;
            };
            let mut t = Table::new(
                format!(
                    "Memory test, {} {} (peak {} GB/s)",
                    acc.model,
                    m.label,
                    trim_float(peak, 2)
                ),
                &["Mode", "Pattern", "Fraction", "Implied [GB/s]"],
            );
            for mb in modes {
                out.report.add(
                    format!("{mkey}.xbtest.mode{}.gb_s", mb.mode),
                    mb.gb_s,
                    "GB/s",
                    format!(
                        "measurements.xbtest[{i}].mode_fractions[{}] x derived peak",
                        mb.mode - 1
                    ),
                );
                t.row(vec![
                    mb.mode.to_string(),
                    mb.label.to_string(),
                    format!("{:.3}", mb.fraction),
                    format!("{:.2}", mb.gb_s),
                ]);
            }
            out.tables.push(t);
        }
    }
    let Some(r) = &acc.fpga_resources else { return };
    let prov = format!("{}.fpga_resources", acc.model);
    out.report
        .add(format!("{key}.luts"), r.luts, "LUTs", format!("{prov}.luts"));
    out.report.add(
        format!("{key}.dsp_blocks"),
        r.dsp_blocks.count,
        &r.dsp_blocks.architecture,
        format!("{prov}.dsp_blocks"),
    );
    for b in &r.ram_blocks {
        out.report.add(
            format!("{key}.ram.{}.kibit", b.block_kind),
            b.capacity_kibit(),
            "Kibit",
            format!("{prov}.ram_blocks[{}] count x kibit_per_block", b.block_kind),
        );
    }
    out.report.add(
        format!("{key}.ram.total_kibit"),
        r.total_ram_kibit(),
        "Kibit",
        format!("{prov}.ram_blocks"),
    );
    if let Ok(avail) = bsp_available_resources(r) {
        for a in avail {
            let class = match a.class {
                ResourceClass::Logic => "logic",
                ResourceClass::Dsp => "dsp",
                ResourceClass::Bram => "bram",
            };
            let p = format!("{prov}.bsp_overhead.{class}");
            out.report.add(
                format!("{key}.bsp.{class}.available_min"),
                a.available_min,
                "",
                p.clone(),
            );
            if a.overhead.is_bound() {
                out.report
                    .add(format!("{key}.bsp.{class}.available_max"), a.available_max, "", p);
            }
        }
    }
}

pub(crate) fn topology_findings(out: &mut Output, spec: &ClusterSpec) -> Option<FabricReport> {
    let f = spec.fabric.as_ref()?;
    let fr = validate_fabric(f, spec).ok()?;
    let r = &mut out.report;
    let prov = "fabric spine_count, leaf_count, uplinks_per_leaf_per_spine, port_rate";
    r.add(
        "topology.uplink_ports_per_leaf",
        fr.uplink_ports_per_leaf,
        "ports",
        prov,
    );
    r.add(
        "topology.downlink_budget_per_leaf",
        fr.downlink_budget_per_leaf,
        "ports",
        "fabric.downlink_ports_per_leaf or radix minus uplinks",
    );
    r.add(
        "topology.blocking.port_budget",
        fr.blocking_port_budget,
        "",
        "downlink budget / uplink ports per leaf",
    );
    r.add(
        "topology.blocking.attached",
        fr.blocking_attached,
        "",
        "fabric.endpoint_attachments bandwidth / all uplink bandwidth",
    );
    if let Some(nominal) = &f.nominal_blocking {
        r.add(
            "topology.blocking.nominal",
            nominal.as_str(),
            "",
            "fabric.nominal_blocking, as quoted",
        );
    }
    r.add("topology.bisection_gbit_s", fr.bisection_gbit_s, "Gbit/s", prov);
    r.add(
        "topology.demand_ports",
        fr.demand_ports,
        "ports",
        "fabric.endpoint_attachments, split ports rounded up per group",
    );
    r.add(
        "topology.available_ports",
        fr.available_ports,
        "ports",
        "leaf_count x downlink budget",
    );
    for p in &spec.partitions {
        if let Ok(l) = node_effective_link(p) {
            out.report.add(
                format!("topology.{}.guaranteed_gbit_s", p.name),
                l.guaranteed_gbit_s,
                "Gbit/s",
                format!("partitions[{}].link", p.name),
            );
        }
    }
    out.report
        .violations
        .extend(fr.violations.iter().map(|v| format!("fabric: {v}")));
    Some(fr)
}

pub(crate) fn leaf_table(fr: &FabricReport) -> Table {
    let mut t = Table::new(
        "Port use per switch (round-robin placement; leaf figures are upper-bound capacity)",
        &["Switch", "Used", "Free"],
    );
    for p in fr.leaves.iter().chain(&fr.spines) {
        t.row(vec![p.switch.clone(), p.used.to_string(), p.free.to_string()]);
    }
    t
}

pub(crate) fn demand_table(fr: &FabricReport) -> Table {
    let mut t = Table::new(
        "Endpoint demand",
        &[
            "Group",
            "Blades",
            "Links",
            "Rate [Gbit/s]",
            "Attached [Gbit/s]",
            "Ports",
        ],
    );
    for g in &fr.groups {
        t.row(vec![
            g.name.clone(),
            g.blades.to_string(),
            g.links_per_blade.to_string(),
            trim_float(g.rate_gbit_s, 1),
            trim_float(g.attached_gbit_s, 1),
            g.ports.to_string(),
        ]);
    }
    t
}

/// Pools and capacity; returns the IO500 report when one is attached.
pub(crate) fn storage(out: &mut Output, spec: &ClusterSpec, spec_path: &Path) -> Result<Option<Io500Report>, CliError> {
    if let Some(s) = &spec.storage {
        let mut t = Table::new(
            format!("Storage pools of {}", s.filesystem_label),
            &["Pool", "Medium", "Devices", "Device [TB]", "Raw [TB]"],
        );
        for (i, p) in s.pools.iter().enumerate() {
            let raw = pool_raw_capacity(p);
            out.report.add(
                format!("storage.{}.raw_tb", p.name),
                bytes_to_tb(raw),
                "TB",
                format!("storage.pools[{i}] device_count x device_capacity_bytes"),
            );
            t.row(vec![
                p.name.clone(),
                format!("{:?}", p.medium).to_lowercase(),
                p.device_count.to_string(),
                trim_float(bytes_to_tb(p.device_capacity_bytes), 3),
                trim_float(bytes_to_tb(raw), 3),
            ]);
        }
        out.tables.push(t);
        match capacity_summary(s) {
            Ok(c) => {
                out.report
                    .add("storage.raw_tb", bytes_to_tb(c.raw_bytes), "TB", "sum of storage.pools");
                out.report.add(
                    "storage.usable_tb",
                    bytes_to_tb(c.usable_bytes),
                    "TB",
                    "storage.usable_capacity_bytes",
                );
                out.report
                    .add("storage.usable_fraction", c.usable_fraction, "", "usable / raw");
            }
            Err(e) => out.report.violations.push(format!("storage: {e}")),
        }
    }
    let Some(file) = &spec.measurements().io500_file else {
        return Ok(None);
    };
    let path = spec_path.parent().unwrap_or(Path::new(".")).join(file);
    out.report.input(&path)?;
    let io = load_io500(&path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    io500_findings(out, &io, "measurements.io500_file");
    Ok(Some(io))
}

pub(crate) fn io500_findings(out: &mut Output, io: &Io500Report, prov: &str) {
    let mut t = Table::new(format!("IO500 ({})", io.spec_label), &["Metric", "Value", "Unit"]);
    for m in &io.metrics {
        let unit = m.unit.to_string();
        out.report
            .add(format!("storage.io500.{}", m.name), m.value, &unit, prov);
        t.row(vec![m.name.clone(), format!("{}", m.value), unit]);
    }
    out.tables.push(t);
}

pub(crate) fn facility(out: &mut Output, spec: &ClusterSpec) {
    if spec.partitions.is_empty() {
        return;
    }
    let opts = EnvelopeOptions::default();
    let env = match it_power_envelope(spec, &opts) {
        Ok(e) => e,
        Err(e) => {
            out.report.add(
                "facility.envelope",
                format!("not computable: {e}"),
                "",
                "partitions[].cpu.tdp_watts_per_socket",
            );
            return;
        }
    };
    let r = &mut out.report;
    r.add(
        "facility.envelope.cpu_watts",
        env.cpu_watts(),
        "W",
        "upper bound: nodes x sockets x tdp_watts_per_socket",
    );
    r.add(
        "facility.envelope.accelerator_watts",
        env.accelerator_watts(),
        "W",
        "upper bound: equipped nodes x cards x tdp_watts",
    );
    r.add(
        "facility.envelope.upper_watts",
        env.upper_watts,
        "W",
        "upper bound: TDP sum, not expected draw",
    );
    r.add(
        "facility.envelope.lower_watts",
        env.lower_watts,
        "W",
        format!("assumption: {} x upper bound", opts.idle_fraction),
    );
    let Some(fac) = &spec.facility else { return };
    r.add(
        "facility.electrical_capacity_watts",
        fac.electrical_capacity_watts,
        "W",
        "facility.electrical_capacity_watts",
    );
    if let Some(p) = fac.planned_capacity_watts {
        r.add(
            "facility.planned_capacity_watts",
            p,
            "W",
            "facility.planned_capacity_watts",
        );
    }
    if let Some(h) = fac.heat_reuse_fraction_min {
        r.add(
            "facility.heat_reuse_fraction_min",
            h,
            "",
            "facility.heat_reuse_fraction_min",
        );
    }
    let (pue, source) = match &spec.measurements().pue {
        Some(s) => (s.value, "measurements.pue"),
        None => (1.0, "no PUE sample, assumed 1"),
    };
    let no_fpga = EnvelopeOptions {
        include_fpga_cards: false,
        ..opts
    };
    for (label, o) in [("headroom", &opts), ("headroom_without_fpga_cards", &no_fpga)] {
        if let Ok(h) = headroom(spec, fac, pue, o) {
            let prov = format!("envelope upper bound x {source}");
            r.add(
                format!("facility.{label}.required_watts"),
                h.required_watts,
                "W",
                prov.clone(),
            );
            r.add(
                format!("facility.{label}.fraction_of_capacity"),
                h.fraction_of_capacity,
                "",
                prov.clone(),
            );
            r.add(format!("facility.{label}.fits"), h.fits, "", prov);
        }
    }
}

pub(crate) fn measurements(out: &mut Output, spec: &ClusterSpec) {
    let m = spec.measurements();
    let r = &mut out.report;
    if let Some(ic) = &m.interconnect {
        r.add(
            "measurements.pingpong_latency_us",
            ic.pingpong_latency_us,
            "us",
            "measurements.interconnect",
        );
        r.add(
            "measurements.bidirectional_gb_s",
            ic.bidirectional_gb_s,
            "GB/s",
            "measurements.interconnect",
        );
        for p in &spec.partitions {
            let Ok(link) = node_effective_link(p) else { continue };
            let Ok(u) = link_utilization(ic.bidirectional_gb_s, link.guaranteed_gbit_s) else {
                continue;
            };
            let mut prov = format!(
                "measurements.interconnect vs partitions[{}].link guaranteed rate",
                p.name
            );
            if u.fraction < 0.5 {
                prov.push_str("; low fraction, likely a single-rail measurement");
            }
            r.add(
                format!("measurements.link_utilization.{}", p.name),
                u.fraction,
                "",
                prov,
            );
        }
    }
    if let Some(p) = &m.pue {
        r.add(
            "measurements.pue",
            p.value,
            "",
            format!("measurements.pue ({})", p.period_label),
        );
    }
    for s in &m.other {
        r.add(
            format!("measurements.{}", s.key),
            s.value,
            &s.unit,
            format!("measurements.other ({})", s.source),
        );
    }
}
