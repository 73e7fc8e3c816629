//! Commands behind the `clusterplan` binary.
//!
//! Every command returns an [`Output`]: a machine-readable [`Report`] plus
//! tables for human display. Exit status is 0 for success, 1 when an
//! invariant or analysis check is violated and 2 for unusable input.

pub mod render;
pub mod report;
mod sections;

use std::path::Path;

use clusterplan::error::LoadError;
use clusterplan::facility::{pue, EnergySample};
use clusterplan::model::{load_cluster_with, ClusterSpec, NodeRef, Strictness};
use clusterplan::perf::{fpga_resource_ratio, peak_flops, peak_memory_bandwidth, speedup, Orientation};
use clusterplan::storage::{io500_compare, load_io500, Io500Report};
use clusterplan::topology::BlockingBasis;
use clusterplan::AnalysisError;

pub use report::{Finding, Output, Report, Table, Value};

/// Section order of the consolidated report.
pub const SECTIONS: [&str; 10] = [
    "inventory",
    "cpu",
    "efficiency",
    "memory",
    "caches",
    "accelerators",
    "topology",
    "storage",
    "facility",
    "measurements",
];

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or unparsable input, unknown names: exit 2.
    Input(String),
    /// The input parsed but broke invariants: exit 1, with a report.
    Invalid(Box<Output>),
    /// An analysis detected an inconsistency in otherwise valid input: exit 1.
    Analysis(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Invalid(_) | CliError::Analysis(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Analysis(m) => f.write_str(m),
            CliError::Invalid(o) => write!(f, "{} violation(s)", o.report.violations.len()),
        }
    }
}

impl std::error::Error for CliError {}

#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    pub lenient: bool,
}

impl Options {
    fn strictness(self) -> Strictness {
        if self.lenient {
            Strictness::Lenient
        } else {
            Strictness::Strict
        }
    }
}

/// Loads `path` into `out`, recording its digest.
fn load(out: &mut Output, path: &Path, opts: Options) -> Result<ClusterSpec, CliError> {
    out.report.input(path)?;
    match load_cluster_with(path, opts.strictness()) {
        Ok(spec) => Ok(spec),
        Err(LoadError::Invalid(v)) => {
            let mut o = out.clone();
            o.report.violations.extend(v.iter().map(|v| v.to_string()));
            Err(CliError::Invalid(Box::new(o)))
        }
        Err(e) => Err(CliError::Input(format!("{}: {e}", path.display()))),
    }
}

fn node<'a>(spec: &'a ClusterSpec, name: &str, path: &Path) -> Result<NodeRef<'a>, CliError> {
    spec.node(name).ok_or_else(|| {
        let known: Vec<&str> = spec.nodes().iter().map(|n| n.name).collect();
        CliError::Input(format!(
            "{}: no partition or node `{name}` (known: {})",
            path.display(),
            known.join(", ")
        ))
    })
}

pub fn cmd_validate(path: &Path, opts: Options) -> Result<Output, CliError> {
    let mut out = Output::new("validate");
    let spec = load(&mut out, path, opts)?;
    sections::inventory(&mut out, &spec);
    if sections::topology_findings(&mut out, &spec).is_some() {
        out.report.add("validate.fabric_checked", true, "", "fabric");
    }
    out.report.add(
        "validate.valid",
        out.report.violations.is_empty(),
        "",
        "all model and fabric invariants",
    );
    Ok(out)
}

pub fn cmd_peak(
    path: &Path,
    partition: &str,
    variant: Option<&str>,
    frequency: Option<f64>,
    opts: Options,
) -> Result<Output, CliError> {
    let mut out = Output::new("peak");
    let spec = load(&mut out, path, opts)?;
    let n = node(&spec, partition, path)?;
    sections::peak_rows(&mut out, &n, variant, frequency)?;
    Ok(out)
}

fn factor_row(
    out: &mut Output,
    key: String,
    baseline: f64,
    candidate: f64,
    orientation: Orientation,
    unit: &str,
    prov: &str,
) -> Option<f64> {
    let s = speedup(baseline, candidate, orientation).ok()?;
    out.report.add(format!("{key}.baseline"), baseline, unit, prov);
    out.report.add(format!("{key}.candidate"), candidate, unit, prov);
    out.report.add(format!("{key}.factor"), s.factor, "x", prov);
    Some(s.factor)
}

/// Figures of `path` relative to `baseline_path`: factors above 1 mean the
/// first cluster is better.
pub fn cmd_compare(
    path: &Path,
    baseline_path: &Path,
    node_name: &str,
    baseline_node: &str,
    opts: Options,
) -> Result<Output, CliError> {
    let mut out = Output::new("compare");
    let cand = load(&mut out, path, opts)?;
    let base = load(&mut out, baseline_path, opts)?;
    let cn = node(&cand, node_name, path)?;
    let bn = node(&base, baseline_node, baseline_path)?;

    let mut peaks = Table::new(
        format!("Peak per node: {} {} vs {} {}", cand.name, cn.name, base.name, bn.name),
        &["Metric", &base.name, &cand.name, "Factor"],
    );
    let higher = Orientation::HigherIsBetter;
    if let (Some(cf), Some(bf)) = (cn.cpu.base_frequency_ghz, bn.cpu.base_frequency_ghz) {
        for v in &cn.cpu.vector_variants {
            let Some(bv) = bn.cpu.variant(&v.name) else { continue };
            let (Ok(c), Ok(b)) = (peak_flops(cn.cpu, v, cf), peak_flops(bn.cpu, bv, bf)) else {
                continue;
            };
            let prov = "cpu and vector_variants of both nodes at base frequency";
            if let Some(f) = factor_row(
                &mut out,
                format!("compare.peak.{}", v.name),
                b.tflops,
                c.tflops,
                higher,
                "TFLOP/s",
                prov,
            ) {
                peaks.row(vec![
                    format!("{} [TFLOP/s]", v.name),
                    format!("{:.3}", b.tflops),
                    format!("{:.3}", c.tflops),
                    format!("{f:.2}"),
                ]);
            }
        }
    }
    let cb = peak_memory_bandwidth(cn.memory, cn.cpu.sockets_per_node);
    let bb = peak_memory_bandwidth(bn.memory, bn.cpu.sockets_per_node);
    if let Some(f) = factor_row(
        &mut out,
        "compare.memory.peak_gb_s".into(),
        bb,
        cb,
        higher,
        "GB/s",
        "memory of both nodes",
    ) {
        peaks.row(vec![
            "Memory peak [GB/s]".into(),
            format!("{bb:.1}"),
            format!("{cb:.1}"),
            format!("{f:.2}"),
        ]);
    }
    out.tables.push(peaks);

    let (cm, bm) = (cand.measurements(), base.measurements());
    for r in cm.flops_runs.iter().filter(|r| r.node == cn.name) {
        if let Some(b) = bm
            .flops_runs
            .iter()
            .find(|b| b.node == bn.name && b.variant == r.variant)
        {
            factor_row(
                &mut out,
                format!("compare.flops.{}", r.variant),
                b.tflops,
                r.tflops,
                higher,
                "TFLOP/s",
                "measurements.flops_runs",
            );
        }
    }
    for r in cm.stream_runs.iter().filter(|r| r.node == cn.name) {
        if let Some(b) = bm
            .stream_runs
            .iter()
            .find(|b| b.node == bn.name && b.numa_mode == r.numa_mode)
        {
            factor_row(
                &mut out,
                format!("compare.stream.{}", r.numa_mode),
                b.gb_s,
                r.gb_s,
                higher,
                "GB/s",
                "measurements.stream_runs",
            );
        }
    }

    let mut apps = Table::new(
        format!("Single node tests: {} vs {}", cand.name, base.name),
        &["Test", &base.name, &cand.name, "Improvement"],
    );
    let mut unmatched = Vec::new();
    for a in &cm.applications {
        let Some(b) = bm.applications.iter().find(|b| b.name == a.name) else {
            unmatched.push(a.name.clone());
            continue;
        };
        if a.orientation != b.orientation {
            out.report
                .violations
                .push(format!("application `{}` has different orientations", a.name));
            continue;
        }
        let prov = format!("measurements.applications[{}] of both files", a.name);
        if let Some(f) = factor_row(
            &mut out,
            format!("compare.app.{}", a.name),
            b.value,
            a.value,
            a.orientation,
            &a.unit,
            &prov,
        ) {
            apps.row(vec![
                format!("{} [{}]", a.name, a.unit),
                trim(b.value),
                trim(a.value),
                format!("{f:.1}x"),
            ]);
        }
    }
    unmatched.extend(
        bm.applications
            .iter()
            .filter(|b| !cm.applications.iter().any(|a| a.name == b.name))
            .map(|b| b.name.clone()),
    );
    if apps.rows.is_empty() {
        out.report.add(
            "compare.app.note",
            "no shared application measurements",
            "",
            "measurements.applications",
        );
    } else {
        out.tables.push(apps);
    }
    if !unmatched.is_empty() {
        out.report.add(
            "compare.app.unmatched",
            unmatched.join(", "),
            "",
            "measurements.applications",
        );
    }

    for ca in cand.accelerators() {
        for ba in base.accelerators() {
            if ca.kind != ba.kind || ca.model == ba.model {
                continue;
            }
            let key = format!("compare.{} vs {}", ca.model, ba.model);
            if let (Some(cr), Some(br)) = (&ca.fpga_resources, &ba.fpga_resources) {
                let Ok(r) = fpga_resource_ratio(cr, br) else { continue };
                let prov = "fpga_resources of both cards";
                out.report.add(format!("{key}.luts"), r.luts, "x", prov);
                if let Some(i) = r.luts_packed {
                    out.report.add(format!("{key}.luts_packed_low"), i.low, "x", prov);
                }
                out.report.add(format!("{key}.dsp_blocks"), r.dsp_blocks, "x", prov);
                out.report.add(format!("{key}.ram_kibit"), r.ram_kibit, "x", prov);
            }
            for (precision, c) in &ca.throughput_table {
                if let Some(b) = ba.throughput_table.get(precision) {
                    if let Ok(s) = speedup(*b, *c, higher) {
                        out.report.add(
                            format!("{key}.{precision}"),
                            s.factor,
                            "x",
                            "throughput_table of both cards",
                        );
                    }
                }
            }
        }
    }

    if let (Some(cf), Some(bf)) = (&cm.io500_file, &bm.io500_file) {
        let ci = io500_at(&mut out, path, cf)?;
        let bi = io500_at(&mut out, baseline_path, bf)?;
        io500_comparison(&mut out, &bi, &ci);
    }
    Ok(out)
}

fn trim(v: f64) -> String {
    clusterplan::units::trim_float(v, 3)
}

fn io500_at(out: &mut Output, spec_path: &Path, file: &str) -> Result<Io500Report, CliError> {
    let p = spec_path.parent().unwrap_or(Path::new(".")).join(file);
    out.report.input(&p)?;
    load_io500(&p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))
}

fn io500_comparison(out: &mut Output, baseline: &Io500Report, candidate: &Io500Report) {
    let c = io500_compare(baseline, candidate);
    for m in &c.matched {
        out.report.add(
            format!("compare.io500.{}", m.name),
            m.speedup.factor,
            "x",
            "IO500 files of both clusters",
        );
    }
    if !c.only_in_baseline.is_empty() {
        out.report.add(
            "compare.io500.only_in_baseline",
            c.only_in_baseline.join(", "),
            "",
            "IO500 files",
        );
    }
    if !c.only_in_candidate.is_empty() {
        out.report.add(
            "compare.io500.only_in_candidate",
            c.only_in_candidate.join(", "),
            "",
            "IO500 files",
        );
    }
}

pub fn cmd_topology(path: &Path, basis: Option<BlockingBasis>, opts: Options) -> Result<Output, CliError> {
    let mut out = Output::new("topology");
    let spec = load(&mut out, path, opts)?;
    if spec.fabric.is_none() {
        return Err(CliError::Input(format!("{}: no `fabric` section", path.display())));
    }
    let fr = sections::topology_findings(&mut out, &spec)
        .ok_or_else(|| CliError::Input(format!("{}: fabric cannot be analysed", path.display())))?;
    if let Some(b) = basis {
        let (name, value) = match b {
            BlockingBasis::PortBudget => ("port_budget", fr.blocking_port_budget),
            BlockingBasis::Attached => ("attached", fr.blocking_attached),
        };
        out.report.add("topology.blocking", value, "", format!("basis {name}"));
    }
    out.tables.push(sections::demand_table(&fr));
    out.tables.push(sections::leaf_table(&fr));
    Ok(out)
}

pub fn cmd_storage(path: &Path, baseline_io500: Option<&Path>, opts: Options) -> Result<Output, CliError> {
    let mut out = Output::new("storage");
    let spec = load(&mut out, path, opts)?;
    if spec.storage.is_none() && spec.measurements().io500_file.is_none() {
        return Err(CliError::Input(format!(
            "{}: no `storage` section and no IO500 file",
            path.display()
        )));
    }
    let io = sections::storage(&mut out, &spec, path)?;
    if let Some(b) = baseline_io500 {
        let Some(io) = io else {
            return Err(CliError::Input(format!("{}: no IO500 file to compare", path.display())));
        };
        out.report.input(b)?;
        let base = load_io500(b).map_err(|e| CliError::Input(format!("{}: {e}", b.display())))?;
        io500_comparison(&mut out, &base, &io);
    }
    Ok(out)
}

pub fn cmd_pue(total: f64, it: f64, label: &str) -> Result<Output, CliError> {
    let mut out = Output::new("pue");
    let sample = EnergySample::new(total, it, label);
    match pue(&sample) {
        Ok(v) => {
            out.report
                .add("pue.value", v, "", format!("total / IT energy ({label})"));
            Ok(out)
        }
        Err(e @ AnalysisError::InconsistentMetering { .. }) => {
            out.report.violations.push(e.to_string());
            Ok(out)
        }
        Err(e) => Err(CliError::Input(e.to_string())),
    }
}

/// Every analysis the file supports, in [`SECTIONS`] order.
pub fn cmd_report(path: &Path, opts: Options) -> Result<Output, CliError> {
    let mut out = Output::new("report");
    let spec = load(&mut out, path, opts)?;
    sections::inventory(&mut out, &spec);
    sections::cpu_peaks(&mut out, &spec);
    sections::synthetic_efficiency(&mut out, &spec);
    sections::memory(&mut out, &spec);
    sections::caches(&mut out, &spec);
    sections::accelerators(&mut out, &spec);
    if let Some(fr) = sections::topology_findings(&mut out, &spec) {
        out.tables.push(sections::demand_table(&fr));
    }
    sections::storage(&mut out, &spec, path)?;
    sections::facility(&mut out, &spec);
    sections::measurements(&mut out, &spec);
    Ok(out)
}
