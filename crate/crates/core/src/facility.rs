//! Facility power: PUE, TDP envelopes and electrical headroom.
//!
//! TDP sums are design upper bounds, not expected draw. Every figure
//! derived from them is labelled as such.

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{positive, AnalysisError};
use crate::model::check::{join, Checker};
use crate::model::{AcceleratorKind, ClusterSpec, Partition};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[schemars(deny_unknown_fields)]
pub struct FacilitySpec {
    pub electrical_capacity_watts: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planned_capacity_watts: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heat_reuse_fraction_min: Option<f64>,
}

impl FacilitySpec {
    pub(crate) fn validate(&self, path: &str, c: &mut Checker) {
        c.positive(path, "electrical_capacity_watts", self.electrical_capacity_watts);
        if let Some(planned) = self.planned_capacity_watts {
            c.positive(path, "planned_capacity_watts", planned);
            c.ensure(
                planned >= self.electrical_capacity_watts,
                join(path, "planned_capacity_watts"),
                format!(
                    "planned {planned} W is below current {} W",
                    self.electrical_capacity_watts
                ),
            );
        }
        if let Some(f) = self.heat_reuse_fraction_min {
            c.fraction_closed(path, "heat_reuse_fraction_min", f);
        }
    }
}

/// Total and IT energy over one period, in any single consistent unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergySample {
    pub total_energy: f64,
    pub it_energy: f64,
    pub period_label: String,
}

impl EnergySample {
    pub fn new(total_energy: f64, it_energy: f64, period_label: impl Into<String>) -> Self {
        Self {
            total_energy,
            it_energy,
            period_label: period_label.into(),
        }
    }
}

pub fn pue(sample: &EnergySample) -> Result<f64, AnalysisError> {
    let it = positive("it_energy", sample.it_energy)?;
    let total = positive("total_energy", sample.total_energy)?;
    if total < it {
        return Err(AnalysisError::InconsistentMetering { total, it });
    }
    Ok(total / it)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeOptions {
    /// Lower bound as a fraction of the TDP sum. An assumption, not a measurement.
    pub idle_fraction: f64,
    /// Count FPGA cards on equipped nodes. Hosts are always counted.
    pub include_fpga_cards: bool,
}

impl Default for EnvelopeOptions {
    fn default() -> Self {
        Self {
            idle_fraction: 0.3,
            include_fpga_cards: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionPower {
    pub partition: String,
    pub cpu_watts: f64,
    pub accelerator_watts: f64,
}

impl PartitionPower {
    pub fn upper_watts(&self) -> f64 {
        self.cpu_watts + self.accelerator_watts
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerEnvelope {
    /// TDP sum; an upper bound.
    pub upper_watts: f64,
    /// `idle_fraction` times the upper bound; an assumption.
    pub lower_watts: f64,
    pub options: EnvelopeOptions,
    pub partitions: Vec<PartitionPower>,
}

impl PowerEnvelope {
    pub fn cpu_watts(&self) -> f64 {
        self.partitions.iter().map(|p| p.cpu_watts).sum()
    }

    pub fn accelerator_watts(&self) -> f64 {
        self.partitions.iter().map(|p| p.accelerator_watts).sum()
    }
}

pub fn partition_power(p: &Partition, opts: &EnvelopeOptions) -> Result<PartitionPower, AnalysisError> {
    let tdp = p
        .cpu
        .tdp_watts_per_socket
        .ok_or_else(|| AnalysisError::Missing(format!("tdp_watts_per_socket for partition `{}`", p.name)))?;
    let cpu_watts =
        f64::from(p.node_count) * f64::from(p.cpu.sockets_per_node) * positive("tdp_watts_per_socket", tdp)?;
    let mut accelerator_watts = 0.0;
    for slot in &p.accelerators {
        if slot.accelerator.kind == AcceleratorKind::Fpga && !opts.include_fpga_cards {
            continue;
        }
        let cards = f64::from(p.equipped_nodes()) * f64::from(slot.count);
        accelerator_watts += cards * positive("tdp_watts", slot.accelerator.tdp_watts)?;
    }
    Ok(PartitionPower {
        partition: p.name.clone(),
        cpu_watts,
        accelerator_watts,
    })
}

pub fn it_power_envelope(spec: &ClusterSpec, opts: &EnvelopeOptions) -> Result<PowerEnvelope, AnalysisError> {
    if !(0.0..=1.0).contains(&opts.idle_fraction) {
        return Err(AnalysisError::OutOfRange {
            name: "idle_fraction",
            range: "[0, 1]",
            value: opts.idle_fraction,
        });
    }
    let partitions = spec
        .partitions
        .iter()
        .map(|p| partition_power(p, opts))
        .collect::<Result<Vec<_>, _>>()?;
    let upper: f64 = partitions.iter().map(PartitionPower::upper_watts).sum();
    Ok(PowerEnvelope {
        upper_watts: upper,
        lower_watts: opts.idle_fraction * upper,
        options: *opts,
        partitions,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Headroom {
    pub envelope_upper_watts: f64,
    pub assumed_pue: f64,
    pub required_watts: f64,
    pub capacity_watts: f64,
    pub fraction_of_capacity: f64,
    pub fits: bool,
}

pub fn headroom(
    spec: &ClusterSpec,
    fac: &FacilitySpec,
    assumed_pue: f64,
    opts: &EnvelopeOptions,
) -> Result<Headroom, AnalysisError> {
    if !(assumed_pue.is_finite() && assumed_pue >= 1.0) {
        return Err(AnalysisError::OutOfRange {
            name: "assumed_pue",
            range: "[1, inf)",
            value: assumed_pue,
        });
    }
    let capacity = positive("electrical_capacity_watts", fac.electrical_capacity_watts)?;
    let envelope = it_power_envelope(spec, opts)?;
    let required = envelope.upper_watts * assumed_pue;
    Ok(Headroom {
        envelope_upper_watts: envelope.upper_watts,
        assumed_pue,
        required_watts: required,
        capacity_watts: capacity,
        fraction_of_capacity: required / capacity,
        fits: required <= capacity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pue_cases() {
        assert_eq!(pue(&EnergySample::new(1122.0, 1000.0, "m")).unwrap(), 1.122);
        assert_eq!(pue(&EnergySample::new(7.0, 7.0, "m")).unwrap(), 1.0);
        assert_eq!(
            pue(&EnergySample::new(999.0, 1000.0, "m")),
            Err(AnalysisError::InconsistentMetering {
                total: 999.0,
                it: 1000.0
            })
        );
        assert!(pue(&EnergySample::new(1.0, 0.0, "m")).is_err());
    }

    #[test]
    fn empty_cluster_draws_nothing() {
        let e = it_power_envelope(&ClusterSpec::empty("x"), &EnvelopeOptions::default()).unwrap();
        assert_eq!(e.upper_watts, 0.0);
        assert_eq!(e.lower_watts, 0.0);
    }

    #[test]
    fn bad_options() {
        let opts = EnvelopeOptions {
            idle_fraction: 1.5,
            ..Default::default()
        };
        assert!(it_power_envelope(&ClusterSpec::empty("x"), &opts).is_err());
        let fac = FacilitySpec {
            electrical_capacity_watts: 1.0,
            planned_capacity_watts: None,
            heat_reuse_fraction_min: None,
        };
        assert!(headroom(&ClusterSpec::empty("x"), &fac, 0.9, &EnvelopeOptions::default()).is_err());
    }
}
