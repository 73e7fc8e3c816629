//! Analytical models of HPC clusters.
//!
//! A cluster is described as data ([`model::ClusterSpec`]), checked once
//! on load, and then fed to pure analyses: peak FLOPS and bandwidth
//! ([`perf`]), fat-tree port budgets ([`topology`]), storage capacity and
//! IO500 results ([`storage`]) and facility power ([`facility`]).
//!
//! ```
//! use clusterplan::model::{CpuSpec, VectorVariant};
//! use clusterplan::perf::peak_flops;
//!
//! let cpu = CpuSpec::new("test", 2, 96);
//! let fma_add = VectorVariant::new("AVX-512 FMA+ADD", 2, 8, 3);
//! let peak = peak_flops(&cpu, &fma_add, 2.60).unwrap();
//! assert!((peak.tflops - 23.9616).abs() < 1e-9);
//! ```

pub mod error;
pub mod facility;
pub mod model;
pub mod perf;
pub mod storage;
pub mod topology;
pub mod units;

pub use error::{AnalysisError, LoadError, Violation};
pub use model::{load_cluster, ClusterSpec};
