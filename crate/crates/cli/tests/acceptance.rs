//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Reference figures are typed in as constants; derived figures are
//! recomputed here by hand rather than taken from the model.

use std::path::PathBuf;
use std::process::ExitCode;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use clusterplan::facility::{headroom, it_power_envelope, pue, EnergySample, EnvelopeOptions, FacilitySpec};
use clusterplan::model::{load_cluster, parse_cluster, to_json, total_cores, total_nodes, AcceleratorKind, Strictness};
use clusterplan::perf::{
    bandwidth_efficiency, ddr_bandwidth, ddr_dimm_bandwidth, flops_efficiency, hbm_clock_for_bandwidth,
    hbm_peak_bandwidth, peak_flops, peak_memory_bandwidth, speedup, xbtest_mode_report, Orientation,
};
use clusterplan::storage::{capacity_summary, load_io500, pool_raw_capacity, Io500Report};
use clusterplan::topology::{
    bisection_bandwidth, blocking_factor, hop_count, link_utilization, validate_fabric, BlockingBasis,
};
use clusterplan::units::bytes_to_tb;
use clusterplan::ClusterSpec;
use clusterplan_cli::{cmd_compare, Options};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn otus() -> ClusterSpec {
    load_cluster(data("otus.cluster")).expect("otus.cluster loads")
}

fn noctua() -> ClusterSpec {
    load_cluster(data("noctua2.cluster")).expect("noctua2.cluster loads")
}

fn check(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn within(got: f64, want: f64, tol: f64, what: &str) -> Result<(), String> {
    check(
        (got - want).abs() <= tol,
        format!("{what}: got {got}, want {want} +/- {tol}"),
    )
}

fn exact(got: f64, want: f64, what: &str) -> Result<(), String> {
    check(got == want, format!("{what}: got {got}, want exactly {want}"))
}

// Theoretical peaks: (cluster, variant, units x elements x ops, printed TFLOP/s).
const PEAKS: [(&str, &str, u32, f64); 6] = [
    ("noctua2", "AVX2 FMA", 16, 5.017),
    ("noctua2", "AVX2 FMA+ADD", 24, 7.526),
    ("otus", "AVX2 FMA", 16, 7.987),
    ("otus", "AVX2 FMA+ADD", 24, 11.980),
    ("otus", "AVX-512 FMA", 32, 15.974),
    ("otus", "AVX-512 FMA+ADD", 48, 23.961),
];

fn spec_named(name: &str) -> ClusterSpec {
    if name == "otus" {
        otus()
    } else {
        noctua()
    }
}

fn c1_peak_flops() -> Outcome {
    let mut worst: f64 = 0.0;
    for (cluster, variant, flops_per_cycle, printed) in PEAKS {
        let spec = spec_named(cluster);
        let node = spec.node("normal").ok_or("no normal node")?;
        let v = node
            .cpu
            .variant(variant)
            .ok_or(format!("{cluster}: no variant {variant}"))?;
        let ghz = node.cpu.base_frequency_ghz.ok_or("no base frequency")?;
        let r = peak_flops(node.cpu, v, ghz).map_err(|e| e.to_string())?;
        within(r.tflops, printed, 0.001, &format!("{cluster} {variant}"))?;
        // The same figure by hand: cores x GHz x flops per cycle.
        let cores = if cluster == "otus" { 192.0 } else { 128.0 };
        let by_hand = cores * ghz * f64::from(flops_per_cycle) / 1000.0;
        within(r.tflops, by_hand, 1e-12, &format!("{cluster} {variant} by hand"))?;
        worst = worst.max((r.tflops - printed).abs());
    }
    Ok(format!("6/6 rows, max deviation {worst:.4} TFLOP/s"))
}

// Synthetic benchmark runs: (cluster, variant, flops per cycle, observed GHz, measured TFLOP/s).
const SYNTHETIC: [(&str, &str, u32, f64, f64); 6] = [
    ("noctua2", "AVX2 FMA", 16, 2.692, 5.449),
    ("noctua2", "AVX2 FMA+ADD", 24, 2.498, 6.793),
    ("otus", "AVX2 FMA", 16, 3.960, 12.073),
    ("otus", "AVX2 FMA+ADD", 24, 3.620, 15.300),
    ("otus", "AVX-512 FMA", 32, 3.510, 21.275),
    ("otus", "AVX-512 FMA+ADD", 48, 3.040, 25.760),
];

fn c2_synthetic_efficiency() -> Outcome {
    let mut fractions = Vec::new();
    for (cluster, variant, fpc, ghz, measured) in SYNTHETIC {
        let spec = spec_named(cluster);
        let run = spec
            .measurements()
            .flops_runs
            .iter()
            .find(|r| r.node == "normal" && r.variant == variant)
            .ok_or(format!("{cluster}: no run for {variant}"))?;
        exact(
            run.tflops,
            measured,
            &format!("{cluster} {variant} transcribed TFLOP/s"),
        )?;
        exact(
            run.observed_frequency_ghz,
            ghz,
            &format!("{cluster} {variant} transcribed GHz"),
        )?;
        let node = spec.node("normal").ok_or("no normal node")?;
        let v = node.cpu.variant(variant).ok_or("no variant")?;
        let e = flops_efficiency(run.tflops, node.cpu, v, run.observed_frequency_ghz).map_err(|e| e.to_string())?;
        let cores = if cluster == "otus" { 192.0 } else { 128.0 };
        let oracle = measured / (cores * ghz * f64::from(fpc) / 1000.0);
        within(e.fraction, oracle, 1e-12, &format!("{cluster} {variant} oracle"))?;
        check(
            e.fraction > 0.85 && e.fraction <= 1.0,
            format!("{cluster} {variant}: {} outside (0.85, 1]", e.fraction),
        )?;
        fractions.push((cluster, variant, e.fraction));
    }
    let spot = |c: &str, v: &str| fractions.iter().find(|f| f.0 == c && f.1 == v).unwrap().2;
    within(spot("otus", "AVX-512 FMA+ADD"), 0.919, 0.005, "otus AVX-512 FMA+ADD")?;
    within(spot("noctua2", "AVX2 FMA"), 0.988, 0.005, "noctua2 AVX2 FMA")?;
    let (lo, hi) = fractions
        .iter()
        .fold((1.0f64, 0.0f64), |(l, h), f| (l.min(f.2), h.max(f.2)));
    Ok(format!(
        "6/6 in (0.85, 1], range {lo:.3}..{hi:.3}; otus AVX-512 FMA+ADD {:.4}, noctua2 AVX2 FMA {:.4}",
        spot("otus", "AVX-512 FMA+ADD"),
        spot("noctua2", "AVX2 FMA")
    ))
}

fn c3_memory_bandwidth() -> Outcome {
    let (o, n) = (otus(), noctua());
    let on = o.node("normal").unwrap();
    let nn = n.node("normal").unwrap();
    let op = peak_memory_bandwidth(on.memory, on.cpu.sockets_per_node);
    let np = peak_memory_bandwidth(nn.memory, nn.cpu.sockets_per_node);
    exact(op, 1228.8, "otus peak")?;
    exact(np, 409.6, "noctua2 peak")?;
    // STREAM runs: measured GB/s and the efficiency it implies.
    let rows = [
        (&n, "NPS4", 370.3, np, 0.904),
        (&o, "NPS4", 984.0, op, 0.801),
        (&o, "NPS1", 970.6, op, 0.790),
    ];
    let mut shown = Vec::new();
    for (spec, numa, measured, peak, want) in rows {
        let run = spec
            .measurements()
            .stream_runs
            .iter()
            .find(|r| r.numa_mode == numa)
            .ok_or(format!("{}: no {numa} run", spec.name))?;
        exact(run.gb_s, measured, "transcribed STREAM")?;
        let e = bandwidth_efficiency(run.gb_s, peak).map_err(|e| e.to_string())?;
        within(e.fraction, want, 0.002, &format!("{} {numa}", spec.name))?;
        shown.push(format!("{:.4}", e.fraction));
    }
    Ok(format!(
        "peaks 409.6 / 1228.8 GB/s exact; efficiencies {}",
        shown.join(" / ")
    ))
}

fn c4_hbm_ddr() -> Outcome {
    let o = otus();
    let v80 = o.accelerator("AMD Alveo V80").ok_or("no V80")?;
    let hbm = v80.memory("HBM2E").and_then(|m| m.hbm).ok_or("no HBM config")?;
    let bw = hbm_peak_bandwidth(&hbm);
    exact(bw.bits_per_transaction as f64, 2048.0, "bits per transaction")?;
    exact(bw.mb_s, 819_200.0, "HBM MB/s")?;
    exact(
        ddr_dimm_bandwidth(3200.0, 8).map_err(|e| e.to_string())?,
        25.6,
        "DDR DIMM",
    )?;
    let ddr = v80.memory("DDR4").and_then(|m| m.ddr).ok_or("no DDR config")?;
    let ddr_peak = ddr_bandwidth(&ddr).map_err(|e| e.to_string())?;
    exact(ddr_peak, 25.6, "V80 DDR")?;

    let reference = [
        ("HBM2E", [0.931, 0.859, 0.826, 0.692], bw.gb_s),
        ("DDR4", [0.879, 0.869, 0.744, 0.716], ddr_peak),
    ];
    let mut shown = Vec::new();
    for (label, fractions, peak) in reference {
        let run = o
            .measurements()
            .xbtest
            .iter()
            .find(|r| r.accelerator == v80.model && r.memory == label)
            .ok_or(format!("no xbtest run for {label}"))?;
        check(
            run.mode_fractions == fractions,
            format!("{label}: transcribed fractions differ"),
        )?;
        let modes = xbtest_mode_report(peak, &run.mode_fractions).map_err(|e| e.to_string())?;
        check(
            modes.windows(2).all(|w| w[0].gb_s > w[1].gb_s),
            format!("{label}: not monotone decreasing"),
        )?;
        let gb: Vec<String> = modes.iter().map(|m| format!("{:.1}", m.gb_s)).collect();
        shown.push(format!("{label} {}", gb.join(">")));
    }
    Ok(format!("819200 MB/s, 25.6 GB/s exact; {}", shown.join("; ")))
}

fn c5_topology() -> Outcome {
    let o = otus();
    let f = o.fabric.as_ref().ok_or("no fabric")?;
    let r = validate_fabric(f, &o).map_err(|e| e.to_string())?;
    check(r.violations.is_empty(), format!("violations: {:?}", r.violations))?;
    let b = blocking_factor(f, &o, BlockingBasis::PortBudget).map_err(|e| e.to_string())?;
    // 22 downlink ports against 10 uplink ports, all NDR800.
    exact(b, 22.0 / 10.0, "blocking factor")?;
    exact(b, 2.2, "blocking factor")?;
    let bis = bisection_bandwidth(f);
    // 13 leaves x 5 spines x 2 links x 800 Gbit/s / 2.
    exact(bis, 13.0 * 5.0 * 2.0 * 800.0 / 2.0, "bisection")?;
    exact(bis, 52_000.0, "bisection")?;
    let fpga = o.partition("fpga").ok_or("no fpga partition")?;
    let link = fpga.link.as_ref().ok_or("no fpga link")?;
    exact(link.rate.gbit_s, 200.0, "fpga link is NDR200")?;
    let ic = o.measurements().interconnect.as_ref().ok_or("no interconnect run")?;
    exact(ic.bidirectional_gb_s, 48.0, "transcribed bidirectional GB/s")?;
    let u = link_utilization(ic.bidirectional_gb_s, link.total_gbit_s()).map_err(|e| e.to_string())?;
    // 48 GB/s against 2 x 25 GB/s.
    within(u.fraction, 48.0 / 50.0, 0.001, "NDR200 utilisation")?;
    Ok(format!(
        "0 violations; blocking {b}; bisection {bis} Gbit/s; NDR200 utilisation {:.3}",
        u.fraction
    ))
}

fn c6_inventory() -> Outcome {
    let o = otus();
    let nodes = total_nodes(&o);
    check(nodes == 636 + 48 + 27 + 32, format!("total nodes {nodes}"))?;
    check(nodes == 743, format!("total nodes {nodes}"))?;
    check(total_cores(&o) == 743 * 192, "total cores")?;
    let n = noctua();
    let mut found = Vec::new();
    for (spec, model, kind, want) in [
        (&o, "AMD Alveo V80", "RAMB36E5", 134_676u64),
        (&o, "AMD Alveo V80", "URAM", 554_400),
        (&n, "BittWare 520N", "M20K", 234_420),
    ] {
        let acc = spec.accelerator(model).ok_or(format!("no {model}"))?;
        check(acc.kind == AcceleratorKind::Fpga, "not an fpga")?;
        let res = acc.fpga_resources.as_ref().ok_or("no fpga resources")?;
        let b = res
            .ram_blocks
            .iter()
            .find(|b| b.block_kind == kind)
            .ok_or(format!("{model}: no {kind}"))?;
        check(
            b.capacity_kibit() == want,
            format!("{model} {kind}: {} != {want}", b.capacity_kibit()),
        )?;
        check(b.count * u64::from(b.kibit_per_block) == want, "integer identity")?;
        found.push(format!("{}x{}={want}", b.count, b.kibit_per_block));
    }
    Ok(format!("743 nodes; RAM {}", found.join(", ")))
}

fn c7_storage() -> Outcome {
    let o = otus();
    let s = o.storage.as_ref().ok_or("no storage")?;
    let pool = |name: &str| s.pools.iter().find(|p| p.name == name).ok_or(format!("no pool {name}"));
    let flash = pool_raw_capacity(pool("flash")?);
    let hdd = pool_raw_capacity(pool("hdd")?);
    check(flash == 24 * 30_720_000_000_000, "flash bytes")?;
    check(hdd == 408 * 18_000_000_000_000, "hdd bytes")?;
    exact(bytes_to_tb(flash), 737.28, "flash TB")?;
    exact(bytes_to_tb(hdd), 7344.0, "hdd TB")?;
    let c = capacity_summary(s).map_err(|e| e.to_string())?;
    within(c.usable_fraction, 0.619, 0.001, "usable fraction")?;

    let bundled = data("otus-io500.txt");
    let report = load_io500(&bundled).map_err(|e| e.to_string())?;
    check(report.metrics.len() == 10, "ten IO500 rows")?;
    // The source table writes two rows with decimal commas.
    let text = std::fs::read_to_string(&bundled).map_err(|e| e.to_string())?;
    let commas = text.replace("179.2", "179,2").replace("346.4", "346,4");
    check(commas != text, "comma rows not found in the bundled file")?;
    let from_commas = Io500Report::parse(&commas).map_err(|e| e.to_string())?;
    check(from_commas == report, "comma-formatted rows differ")?;
    let again = Io500Report::parse(&report.render()).map_err(|e| e.to_string())?;
    check(again == report, "render/parse round trip differs")?;
    Ok(format!(
        "flash 737.28 TB, hdd 7344 TB exact; usable fraction {:.4}; IO500 10 rows round-trip (comma rows included)",
        c.usable_fraction
    ))
}

fn c8_pue() -> Outcome {
    let v = pue(&EnergySample::new(1122.0, 1000.0, "reference")).map_err(|e| e.to_string())?;
    exact(v, 1.122, "pue(1122, 1000)")?;
    let mut runner = TestRunner::new(Config::with_cases(1000));
    runner
        .run(&(1e-3f64..1e9, 1.0f64..3.0, 1e-6f64..1e6), |(it, over, c)| {
            let total = it * over;
            let a = pue(&EnergySample::new(total, it, "p")).unwrap();
            let b = pue(&EnergySample::new(c * total, c * it, "p")).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a, "{a} vs {b}");
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok("pue(1122, 1000) = 1.122 exact; scale invariance 1000/1000 samples".into())
}

const APP_ROWS: [(&str, f64); 4] = [
    ("HPL (NPS4)", 3.2),
    ("HPCG (NPS4)", 2.9),
    ("CP2K (NPS4)", 3.0),
    ("QuantumESPRESSO (NPS4)", 2.9),
];

fn c9_speedups() -> Outcome {
    let out = cmd_compare(
        &data("otus.cluster"),
        &data("noctua2.cluster"),
        "normal",
        "normal",
        Options::default(),
    )
    .map_err(|e| e.to_string())?;
    let mut shown = Vec::new();
    for (name, printed) in APP_ROWS {
        let f = out
            .report
            .number(&format!("compare.app.{name}.factor"))
            .ok_or(format!("no factor for {name}"))?;
        let rounded = (f * 10.0).round() / 10.0;
        within(rounded, printed, 1e-9, name)?;
        shown.push(format!("{rounded:.1}"));
    }
    Ok(format!("improvements {}", shown.join(", ")))
}

struct Property {
    name: &'static str,
    run: fn(&mut TestRunner) -> Result<(), String>,
}

fn runs<S: Strategy>(
    r: &mut TestRunner,
    s: S,
    f: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    r.run(&s, f).map_err(|e| e.to_string())
}

fn rel(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

const PROPERTIES: [Property; 12] = [
    Property {
        name: "model load/save round trip",
        run: |r| {
            let base = otus();
            runs(r, (1u32..400, 0.5f64..5.0), |(blades, ghz)| {
                let mut s = base.clone();
                s.partitions[0].node_count = 2 * blades;
                s.partitions[0].cpu.base_frequency_ghz = Some(ghz);
                s.declared_total_nodes = None;
                let back = parse_cluster(&to_json(&s), Strictness::Strict).unwrap();
                prop_assert_eq!(&back, &s);
                prop_assert_eq!(parse_cluster(&to_json(&back), Strictness::Strict).unwrap(), back);
                Ok(())
            })
        },
    },
    Property {
        name: "model totals additive over partitions",
        run: |r| {
            let base = otus();
            runs(r, proptest::collection::vec(1u32..1000, 4), |sizes| {
                let mut s = base.clone();
                for (p, n) in s.partitions.iter_mut().zip(&sizes) {
                    p.node_count = *n;
                }
                let nodes: u64 = sizes.iter().map(|&n| u64::from(n)).sum();
                let cores: u64 = s.partitions.iter().map(|p| p.cores()).sum();
                prop_assert_eq!(total_nodes(&s), nodes);
                prop_assert_eq!(total_cores(&s), cores);
                Ok(())
            })
        },
    },
    Property {
        name: "perf peak multiplicative in each of six factors",
        run: |r| {
            let cpu = otus().partitions[0].cpu.clone();
            runs(r, (0usize..6, 0.5f64..5.0, 0usize..4), |(factor, ghz, vi)| {
                let v = cpu.vector_variants[vi].clone();
                let base = peak_flops(&cpu, &v, ghz).unwrap().tflops;
                let (mut c, mut w, mut g) = (cpu.clone(), v.clone(), ghz);
                match factor {
                    0 => c.sockets_per_node *= 2,
                    1 => c.cores_per_socket *= 2,
                    2 => g *= 2.0,
                    3 => w.execution_units *= 2,
                    4 => w.elements_per_vector *= 2,
                    _ => w.operations_per_element *= 2,
                }
                prop_assert!(rel(peak_flops(&c, &w, g).unwrap().tflops, 2.0 * base));
                Ok(())
            })
        },
    },
    Property {
        name: "perf HBM clock inversion is identity",
        run: |r| {
            let hbm = otus()
                .accelerator("AMD Alveo V80")
                .unwrap()
                .memory("HBM2E")
                .unwrap()
                .hbm
                .unwrap();
            runs(r, 100.0f64..4000.0, |mhz| {
                let h = clusterplan::model::HbmConfig {
                    controller_clock_mhz: mhz,
                    ..hbm
                };
                let solved = hbm_clock_for_bandwidth(&h, hbm_peak_bandwidth(&h).gb_s).unwrap();
                prop_assert!((solved - mhz).abs() <= 1e-9 * mhz);
                Ok(())
            })
        },
    },
    Property {
        name: "perf lower-is-better speedups are reciprocal",
        run: |r| {
            runs(r, (1e-6f64..1e6, 1e-6f64..1e6), |(a, b)| {
                let x = speedup(a, b, Orientation::LowerIsBetter).unwrap().factor;
                let y = speedup(b, a, Orientation::LowerIsBetter).unwrap().factor;
                prop_assert!((x * y - 1.0).abs() <= 1e-12);
                Ok(())
            })
        },
    },
    Property {
        name: "topology port-budget blocking invariant under rate scaling",
        run: |r| {
            let o = otus();
            let f = o.fabric.clone().unwrap();
            let before = blocking_factor(&f, &o, BlockingBasis::PortBudget).unwrap();
            runs(r, 1e-3f64..1e3, |k| {
                let mut g = f.clone();
                g.port_rate.gbit_s *= k;
                prop_assert!(rel(blocking_factor(&g, &o, BlockingBasis::PortBudget).unwrap(), before));
                Ok(())
            })
        },
    },
    Property {
        name: "topology bisection linear in leaves, spines, uplinks, rate",
        run: |r| {
            let f = otus().fabric.unwrap();
            let base = bisection_bandwidth(&f);
            runs(r, (1u32..8, 0.01f64..100.0, 0usize..4), |(k, x, which)| {
                let mut g = f.clone();
                let want = match which {
                    0 => {
                        g.leaf_count *= k;
                        f64::from(k) * base
                    }
                    1 => {
                        g.spine_count *= k;
                        f64::from(k) * base
                    }
                    2 => {
                        g.uplinks_per_leaf_per_spine *= k;
                        f64::from(k) * base
                    }
                    _ => {
                        g.port_rate.gbit_s *= x;
                        x * base
                    }
                };
                prop_assert!(rel(bisection_bandwidth(&g), want));
                Ok(())
            })
        },
    },
    Property {
        name: "topology hop count symmetric",
        run: |r| {
            let f = otus().fabric.unwrap();
            runs(r, (0usize..13, 0usize..13), |(a, b)| {
                prop_assert_eq!(hop_count(&f, a, b).unwrap(), hop_count(&f, b, a).unwrap());
                Ok(())
            })
        },
    },
    Property {
        name: "storage pool capacity multiplicative",
        run: |r| {
            let p = otus().storage.unwrap().pools[0].clone();
            runs(r, (1u64..10_000, 1u64..40_000_000_000_000, 1u64..16), |(n, size, k)| {
                let a = clusterplan::storage::Pool {
                    device_count: n,
                    device_capacity_bytes: size,
                    ..p.clone()
                };
                let raw = pool_raw_capacity(&a);
                prop_assert_eq!(u128::from(raw), u128::from(n) * u128::from(size));
                let b = clusterplan::storage::Pool {
                    device_count: n * k,
                    ..a.clone()
                };
                let c = clusterplan::storage::Pool {
                    device_capacity_bytes: size * k,
                    ..a
                };
                prop_assert_eq!(pool_raw_capacity(&b), k * raw);
                prop_assert_eq!(pool_raw_capacity(&c), k * raw);
                Ok(())
            })
        },
    },
    Property {
        name: "storage IO500 comma/point equality and round trip",
        run: |r| {
            runs(
                r,
                proptest::collection::vec((1u32..10_000_000, 1u32..4), 1..10),
                |rows| {
                    let point: String = rows
                        .iter()
                        .enumerate()
                        .map(|(i, (m, d))| format!("metric-{i} {} GB/s\n", f64::from(*m) / 10f64.powi(*d as i32)))
                        .collect();
                    let comma = point.replace('.', ",");
                    let a = Io500Report::parse(&point).unwrap();
                    prop_assert_eq!(&Io500Report::parse(&comma).unwrap(), &a);
                    prop_assert_eq!(Io500Report::parse(&a.render()).unwrap(), a);
                    Ok(())
                },
            )
        },
    },
    Property {
        name: "facility envelope additive over partitions",
        run: |r| {
            let base = otus();
            runs(
                r,
                (proptest::collection::vec(50.0f64..600.0, 4), any::<bool>()),
                |(tdps, fpga)| {
                    let mut s = base.clone();
                    for (p, t) in s.partitions.iter_mut().zip(&tdps) {
                        p.cpu.tdp_watts_per_socket = Some(*t);
                    }
                    let opts = EnvelopeOptions {
                        include_fpga_cards: fpga,
                        ..EnvelopeOptions::default()
                    };
                    let whole = it_power_envelope(&s, &opts).unwrap().upper_watts;
                    let parts: f64 = s
                        .partitions
                        .iter()
                        .map(|p| {
                            let mut one = ClusterSpec::empty("one");
                            one.partitions = vec![p.clone()];
                            it_power_envelope(&one, &opts).unwrap().upper_watts
                        })
                        .sum();
                    prop_assert!(rel(whole, parts));
                    Ok(())
                },
            )
        },
    },
    Property {
        name: "facility headroom fits monotone in capacity",
        run: |r| {
            let o = otus();
            runs(r, (1.0f64..2.0, 1e4f64..1e7, 0.0f64..1e7), |(p, w, more)| {
                let fac = |watts: f64| FacilitySpec {
                    electrical_capacity_watts: watts,
                    planned_capacity_watts: None,
                    heat_reuse_fraction_min: None,
                };
                let opts = EnvelopeOptions::default();
                let a = headroom(&o, &fac(w), p, &opts).unwrap();
                let b = headroom(&o, &fac(w + more), p, &opts).unwrap();
                prop_assert!(!a.fits || b.fits);
                Ok(())
            })
        },
    },
];

const CASES_PER_PROPERTY: u32 = 256;

fn c10_properties() -> Outcome {
    let mut failed = Vec::new();
    for p in &PROPERTIES {
        let mut runner = TestRunner::new(Config::with_cases(CASES_PER_PROPERTY));
        if let Err(e) = (p.run)(&mut runner) {
            failed.push(format!("{}: {e}", p.name));
        }
    }
    if failed.is_empty() {
        Ok(format!("{} properties x {CASES_PER_PROPERTY} cases", PROPERTIES.len()))
    } else {
        Err(failed.join("; "))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("peak FLOPS golden set", c1_peak_flops),
        ("synthetic efficiency", c2_synthetic_efficiency),
        ("memory bandwidth", c3_memory_bandwidth),
        ("HBM/DDR derivations", c4_hbm_ddr),
        ("topology", c5_topology),
        ("inventory", c6_inventory),
        ("storage", c7_storage),
        ("facility", c8_pue),
        ("speedups", c9_speedups),
        ("property suites", c10_properties),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
