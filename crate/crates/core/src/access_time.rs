//! Analytic access time of a component, local (three stages) or remote
//! (six stages), with the per-stage breakdown kept for reporting.

use std::fmt;

use crate::error::{check_duration, check_rate, check_ratio, Result};
use crate::model::{Command, Component, HardwareProfile};

/// Label of one pipeline stage, `t1` through `t6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StageLabel(u8);

impl StageLabel {
    pub const T1: StageLabel = StageLabel(1);
    pub const T2: StageLabel = StageLabel(2);
    pub const T3: StageLabel = StageLabel(3);
    pub const T4: StageLabel = StageLabel(4);
    pub const T5: StageLabel = StageLabel(5);
    pub const T6: StageLabel = StageLabel(6);

    pub fn index(&self) -> u8 {
        self.0
    }
}

impl fmt::Display for StageLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

/// What a stage does, used to annotate reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageKind {
    /// Command crosses the client bus.
    CommandToProcessor,
    /// Command crosses the network.
    CommandOverNetwork,
    /// Memory lookup of the sublibrary through the cache.
    MemorySearch,
    /// Component crosses the server bus to the network interface.
    ComponentToServerNic,
    /// Component crosses the network.
    ComponentOverNetwork,
    /// Component crosses the client bus to the display.
    ComponentToDisplay,
}

impl StageKind {
    pub fn description(&self) -> &'static str {
        match self {
            StageKind::CommandToProcessor => "command to processor over client bus",
            StageKind::CommandOverNetwork => "command across network",
            StageKind::MemorySearch => "memory search (cache + main memory)",
            StageKind::ComponentToServerNic => "component to server NIC over server bus",
            StageKind::ComponentOverNetwork => "component across network",
            StageKind::ComponentToDisplay => "component to display over client bus",
        }
    }
}

/// Inputs of a stage. Transfers carry bits and rate; the memory stage carries
/// the cache parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StageInputs {
    Transfer { bits: u64, rate: f64 },
    Memory { hit_ratio: f64, cache_time: f64, memory_time: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stage {
    pub label: StageLabel,
    pub kind: StageKind,
    pub inputs: StageInputs,
    pub duration_ns: f64,
}

/// Ordered stage durations and their sum.
///
/// The total is accumulated in stage order starting from 0.0 so that it is
/// bit-reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct AccessTimeBreakdown {
    stages: Vec<Stage>,
    total_ns: f64,
}

impl AccessTimeBreakdown {
    fn from_stages(stages: Vec<Stage>) -> Self {
        let total_ns = stages.iter().fold(0.0, |acc, s| acc + s.duration_ns);
        Self { stages, total_ns }
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn total_ns(&self) -> f64 {
        self.total_ns
    }

    pub fn total_seconds(&self) -> f64 {
        self.total_ns * 1e-9
    }

    pub fn durations(&self) -> Vec<(StageLabel, f64)> {
        self.stages.iter().map(|s| (s.label, s.duration_ns)).collect()
    }
}

/// `bits / rate` in ns for a rate in bits/ns.
pub fn transfer_time(bits: u64, rate: f64) -> Result<f64> {
    let rate = check_rate("rate", rate)?;
    Ok(bits as f64 / rate)
}

/// Expected lookup time through a single cache level:
/// `hr·t_c + (1 − hr)·(t_c + t_m)`.
pub fn cache_effective_time(hit_ratio: f64, cache_time: f64, memory_time: f64) -> Result<f64> {
    let hr = check_ratio("hit_ratio", hit_ratio)?;
    let tc = check_duration("cache_time", cache_time)?;
    let tm = check_duration("memory_time", memory_time)?;
    Ok(hr * tc + (1.0 - hr) * (tc + tm))
}

fn transfer_stage(label: StageLabel, kind: StageKind, bits: u64, rate: f64) -> Result<Stage> {
    Ok(Stage { label, kind, inputs: StageInputs::Transfer { bits, rate }, duration_ns: transfer_time(bits, rate)? })
}

fn memory_stage(label: StageLabel, hw: &HardwareProfile) -> Result<Stage> {
    Ok(Stage {
        label,
        kind: StageKind::MemorySearch,
        inputs: StageInputs::Memory {
            hit_ratio: hw.hit_ratio(),
            cache_time: hw.cache_time(),
            memory_time: hw.memory_time(),
        },
        duration_ns: cache_effective_time(hw.hit_ratio(), hw.cache_time(), hw.memory_time())?,
    })
}

/// Access time on the requester's own machine.
pub fn local_access_time(
    command: &Command,
    component: &Component,
    hw: &HardwareProfile,
) -> Result<AccessTimeBreakdown> {
    local_access_time_bits(command.bits(), component.bits(), hw)
}

/// [`local_access_time`] on raw bit counts.
pub fn local_access_time_bits(
    command_bits: u64,
    component_bits: u64,
    hw: &HardwareProfile,
) -> Result<AccessTimeBreakdown> {
    let stages = vec![
        transfer_stage(StageLabel::T1, StageKind::CommandToProcessor, command_bits, hw.bus_rate())?,
        memory_stage(StageLabel::T2, hw)?,
        transfer_stage(StageLabel::T3, StageKind::ComponentToDisplay, component_bits, hw.bus_rate())?,
    ];
    Ok(AccessTimeBreakdown::from_stages(stages))
}

/// Access time of a component held on a server and delivered over a network
/// at `network_rate` bits/ns.
pub fn remote_access_time(
    command: &Command,
    component: &Component,
    client: &HardwareProfile,
    server: &HardwareProfile,
    network_rate: f64,
) -> Result<AccessTimeBreakdown> {
    remote_access_time_bits(command.bits(), component.bits(), client, server, network_rate)
}

/// [`remote_access_time`] on raw bit counts.
pub fn remote_access_time_bits(
    command_bits: u64,
    component_bits: u64,
    client: &HardwareProfile,
    server: &HardwareProfile,
    network_rate: f64,
) -> Result<AccessTimeBreakdown> {
    let network_rate = check_rate("network_rate", network_rate)?;
    let stages = vec![
        transfer_stage(StageLabel::T1, StageKind::CommandToProcessor, command_bits, client.bus_rate())?,
        transfer_stage(StageLabel::T2, StageKind::CommandOverNetwork, command_bits, network_rate)?,
        memory_stage(StageLabel::T3, server)?,
        transfer_stage(StageLabel::T4, StageKind::ComponentToServerNic, component_bits, server.bus_rate())?,
        transfer_stage(StageLabel::T5, StageKind::ComponentOverNetwork, component_bits, network_rate)?,
        transfer_stage(StageLabel::T6, StageKind::ComponentToDisplay, component_bits, client.bus_rate())?,
    ];
    Ok(AccessTimeBreakdown::from_stages(stages))
}
