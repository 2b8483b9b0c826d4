//! Scenario documents: the TOML form of a [`Scenario`].
//!
//! Field names follow the model types. Rates are strings with a unit suffix
//! (`"50 Mbps"`, `"0.1 bpns"`) or bare numbers in bits/ns; every other time is
//! a number of nanoseconds. See `docs/scenario-format.md` for the full layout.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::metric::sublibrary_count;
use crate::model::{
    Command, Component, DooclDescriptor, Environment, HardwareProfile, NetworkProfile, Organization, RateDistribution,
    Scenario,
};

/// Scenario of the local-desktop worked example.
pub const ILLUSTRATION1: &str = include_str!("../fixtures/illustration1.toml");
/// Scenario of the client/server worked example, with its printed search time.
pub const ILLUSTRATION2: &str = include_str!("../fixtures/illustration2.toml");

/// Looks up a fixture shipped with the crate by name.
pub fn builtin_fixture(name: &str) -> Option<&'static str> {
    match name {
        "illustration1" => Some(ILLUSTRATION1),
        "illustration2" => Some(ILLUSTRATION2),
        _ => None,
    }
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed scenario at `{path}`: {message}")]
    Parse { path: String, message: String },

    #[error("invalid `{path}`: {source}")]
    Invalid {
        path: String,
        #[source]
        source: crate::Error,
    },

    #[error("`{path}`: {message}")]
    Inconsistent { path: String, message: String },

    #[error("cannot render scenario: {0}")]
    Render(String),
}

impl DocumentError {
    /// Dotted path of the offending field, `.` for document-level errors.
    pub fn field_path(&self) -> Option<&str> {
        match self {
            DocumentError::Parse { path, .. }
            | DocumentError::Invalid { path, .. }
            | DocumentError::Inconsistent { path, .. } => Some(path),
            _ => None,
        }
    }
}

fn invalid(prefix: &str) -> impl FnOnce(crate::Error) -> DocumentError + '_ {
    move |source| {
        let path = match source.field() {
            Some(field) => format!("{prefix}.{field}"),
            None => prefix.to_string(),
        };
        DocumentError::Invalid { path, source }
    }
}

fn missing(path: &str, what: &str) -> DocumentError {
    DocumentError::Inconsistent { path: path.to_string(), message: format!("missing {what}") }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RateUnit {
    BitsPerSecond,
    KilobitsPerSecond,
    MegabitsPerSecond,
    GigabitsPerSecond,
    BitsPerNanosecond,
}

impl RateUnit {
    pub fn suffix(&self) -> &'static str {
        match self {
            RateUnit::BitsPerSecond => "bps",
            RateUnit::KilobitsPerSecond => "Kbps",
            RateUnit::MegabitsPerSecond => "Mbps",
            RateUnit::GigabitsPerSecond => "Gbps",
            RateUnit::BitsPerNanosecond => "bpns",
        }
    }

    fn from_suffix(s: &str) -> Option<Self> {
        Some(match s.to_ascii_lowercase().as_str() {
            "bps" => RateUnit::BitsPerSecond,
            "kbps" => RateUnit::KilobitsPerSecond,
            "mbps" => RateUnit::MegabitsPerSecond,
            "gbps" => RateUnit::GigabitsPerSecond,
            "bpns" | "bits/ns" => RateUnit::BitsPerNanosecond,
            _ => return None,
        })
    }
}

/// A data rate as written in a document.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rate {
    pub value: f64,
    pub unit: RateUnit,
}

impl Rate {
    pub fn bpns(value: f64) -> Self {
        Self { value, unit: RateUnit::BitsPerNanosecond }
    }

    pub fn mbps(value: f64) -> Self {
        Self { value, unit: RateUnit::MegabitsPerSecond }
    }

    /// Value in bits per nanosecond; 1 Mbps is 10⁻³ bits/ns.
    pub fn bits_per_ns(&self) -> f64 {
        match self.unit {
            RateUnit::BitsPerSecond => self.value / 1e9,
            RateUnit::KilobitsPerSecond => self.value / 1e6,
            RateUnit::MegabitsPerSecond => self.value / 1e3,
            RateUnit::GigabitsPerSecond | RateUnit::BitsPerNanosecond => self.value,
        }
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.value, self.unit.suffix())
    }
}

impl FromStr for Rate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let split = s.find(|c: char| c.is_ascii_alphabetic() && c != 'e' && c != 'E').unwrap_or(s.len());
        let (number, unit) = s.split_at(split);
        let value: f64 = number.trim().parse().map_err(|_| format!("`{s}` does not start with a number"))?;
        let unit = match unit.trim() {
            "" => RateUnit::BitsPerNanosecond,
            u => RateUnit::from_suffix(u)
                .ok_or_else(|| format!("unknown rate unit `{u}` (expected bps, Kbps, Mbps, Gbps or bpns)"))?,
        };
        Ok(Rate { value, unit })
    }
}

impl Serialize for Rate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct RateVisitor;

        impl Visitor<'_> for RateVisitor {
            type Value = Rate;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rate such as \"50 Mbps\" or a number of bits per nanosecond")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Rate, E> {
                Ok(Rate::bpns(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rate, E> {
                Ok(Rate::bpns(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rate, E> {
                Ok(Rate::bpns(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rate, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(RateVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DooclDocument {
    pub organization: Organization,
    pub component_count: u64,
    /// ns per search step.
    pub iteration_time: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sublibrary_count: Option<u64>,
    /// With `os_types`, an alternative to `sublibrary_count`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub machine_types: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub os_types: Option<u64>,
    pub available: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommandDocument {
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bits_per_char: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDocument {
    pub name: String,
    pub lines: u64,
    pub chars_per_line: u64,
    pub bits_per_char: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardwareDocument {
    pub bus_rate: Rate,
    pub hit_ratio: f64,
    /// ns
    pub cache_time: f64,
    /// ns
    pub memory_time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DistributionKind {
    #[default]
    Fixed,
    Uniform,
    Normal,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<DistributionKind>,
    /// Fixed rate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data_rate: Option<Rate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<Rate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<Rate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean: Option<Rate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stddev: Option<Rate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvironmentKind {
    Local,
    Remote,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentDocument {
    pub kind: EnvironmentKind,
    pub client: HardwareDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub server: Option<HardwareDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub network: Option<NetworkDocument>,
}

/// Textual mirror of [`Scenario`] that keeps the units the author wrote.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// ns; replaces the computed search time.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explicit_ts_override: Option<f64>,
    pub doocl: DooclDocument,
    pub command: CommandDocument,
    pub component: ComponentDocument,
    pub environment: EnvironmentDocument,
}

impl ScenarioDocument {
    pub fn from_toml_str(text: &str) -> Result<Self, DocumentError> {
        let de = toml::Deserializer::parse(text).map_err(|e| DocumentError::Parse {
            path: ".".to_string(),
            message: e.to_string().trim_end().to_string(),
        })?;
        serde_path_to_error::deserialize(de).map_err(|e| DocumentError::Parse {
            path: e.path().to_string(),
            message: e.inner().to_string().trim_end().to_string(),
        })
    }

    pub fn to_toml_string(&self) -> Result<String, DocumentError> {
        toml::to_string_pretty(self).map_err(|e| DocumentError::Render(e.to_string()))
    }

    pub fn to_scenario(&self) -> Result<Scenario, DocumentError> {
        let doocl = self.doocl.to_descriptor()?;
        let command = Command::new(
            self.command.text.clone(),
            self.command.bits_per_char.unwrap_or(Command::DEFAULT_BITS_PER_CHAR),
        )
        .map_err(invalid("command"))?;
        let c = &self.component;
        let component =
            Component::new(c.name.clone(), c.lines, c.chars_per_line, c.bits_per_char).map_err(invalid("component"))?;
        let environment = self.environment.to_environment()?;
        let scenario = Scenario::new(doocl, environment, command, component);
        match self.explicit_ts_override {
            Some(ts) => scenario
                .with_ts_override(ts)
                .map_err(|source| DocumentError::Invalid { path: "explicit_ts_override".to_string(), source }),
            None => Ok(scenario),
        }
    }

    /// Document for `scenario`, with every rate in bits/ns.
    pub fn from_scenario(scenario: &Scenario, label: Option<String>) -> Self {
        let d = &scenario.doocl;
        let hw = |h: &HardwareProfile| HardwareDocument {
            bus_rate: Rate::bpns(h.bus_rate()),
            hit_ratio: h.hit_ratio(),
            cache_time: h.cache_time(),
            memory_time: h.memory_time(),
        };
        let environment = match &scenario.environment {
            Environment::Local { client } => {
                EnvironmentDocument { kind: EnvironmentKind::Local, client: hw(client), server: None, network: None }
            }
            Environment::Remote { client, server, network } => EnvironmentDocument {
                kind: EnvironmentKind::Remote,
                client: hw(client),
                server: Some(hw(server)),
                network: Some(NetworkDocument::from_distribution(network.data_rate())),
            },
        };
        ScenarioDocument {
            label,
            explicit_ts_override: scenario.explicit_ts_override,
            doocl: DooclDocument {
                organization: d.organization(),
                component_count: d.component_count(),
                iteration_time: d.iteration_time(),
                sublibrary_count: Some(d.sublibrary_count()),
                machine_types: None,
                os_types: None,
                available: d.available(),
            },
            command: CommandDocument {
                text: scenario.command.text().to_string(),
                bits_per_char: Some(scenario.command.bits_per_char()),
            },
            component: ComponentDocument {
                name: scenario.component.name().to_string(),
                lines: scenario.component.lines(),
                chars_per_line: scenario.component.chars_per_line(),
                bits_per_char: scenario.component.bits_per_char(),
            },
            environment,
        }
    }
}

impl DooclDocument {
    fn to_descriptor(&self) -> Result<DooclDescriptor, DocumentError> {
        let from_types = match (self.machine_types, self.os_types) {
            (Some(m), Some(o)) => Some(sublibrary_count(m, o).map_err(invalid("doocl"))?),
            (None, None) => None,
            (Some(_), None) => return Err(missing("doocl.os_types", "os_types (given machine_types)")),
            (None, Some(_)) => return Err(missing("doocl.machine_types", "machine_types (given os_types)")),
        };
        let count = match (self.sublibrary_count, from_types) {
            (Some(n), Some(product)) if n != product => {
                return Err(DocumentError::Inconsistent {
                    path: "doocl.sublibrary_count".to_string(),
                    message: format!("{n} disagrees with machine_types × os_types = {product}"),
                })
            }
            (Some(n), _) => n,
            (None, Some(product)) => product,
            (None, None) => {
                return Err(missing("doocl.sublibrary_count", "sublibrary_count (or machine_types and os_types)"))
            }
        };
        DooclDescriptor::new(self.organization, self.component_count, self.iteration_time, count, self.available)
            .map_err(invalid("doocl"))
    }
}

impl HardwareDocument {
    fn to_profile(&self, prefix: &str) -> Result<HardwareProfile, DocumentError> {
        HardwareProfile::new(self.bus_rate.bits_per_ns(), self.hit_ratio, self.cache_time, self.memory_time)
            .map_err(invalid(prefix))
    }
}

impl NetworkDocument {
    pub fn fixed(rate: Rate) -> Self {
        Self { data_rate: Some(rate), ..Self::default() }
    }

    fn from_distribution(d: RateDistribution) -> Self {
        let mut doc = Self::default();
        match d {
            RateDistribution::Fixed(r) => doc.data_rate = Some(Rate::bpns(r)),
            RateDistribution::Uniform { lo, hi } => {
                doc.distribution = Some(DistributionKind::Uniform);
                doc.lo = Some(Rate::bpns(lo));
                doc.hi = Some(Rate::bpns(hi));
            }
            RateDistribution::Normal { mean, stddev } => {
                doc.distribution = Some(DistributionKind::Normal);
                doc.mean = Some(Rate::bpns(mean));
                doc.stddev = Some(Rate::bpns(stddev));
            }
        }
        doc
    }

    fn to_profile(&self) -> Result<NetworkProfile, DocumentError> {
        const P: &str = "environment.network";
        let need = |field: Option<Rate>, name: &str| {
            field.map(|r| r.bits_per_ns()).ok_or_else(|| missing(&format!("{P}.{name}"), name))
        };
        let kind = self.distribution.unwrap_or_default();
        let unexpected: &[(&str, bool)] = match kind {
            DistributionKind::Fixed => &[
                ("lo", self.lo.is_some()),
                ("hi", self.hi.is_some()),
                ("mean", self.mean.is_some()),
                ("stddev", self.stddev.is_some()),
            ],
            DistributionKind::Uniform => &[
                ("data_rate", self.data_rate.is_some()),
                ("mean", self.mean.is_some()),
                ("stddev", self.stddev.is_some()),
            ],
            DistributionKind::Normal => {
                &[("data_rate", self.data_rate.is_some()), ("lo", self.lo.is_some()), ("hi", self.hi.is_some())]
            }
        };
        if let Some((name, _)) = unexpected.iter().find(|(_, present)| *present) {
            return Err(DocumentError::Inconsistent {
                path: format!("{P}.{name}"),
                message: format!("not used by a {kind:?} distribution").to_lowercase(),
            });
        }
        let dist = match kind {
            DistributionKind::Fixed => RateDistribution::fixed(need(self.data_rate, "data_rate")?),
            DistributionKind::Uniform => RateDistribution::uniform(need(self.lo, "lo")?, need(self.hi, "hi")?),
            DistributionKind::Normal => {
                RateDistribution::normal(need(self.mean, "mean")?, need(self.stddev, "stddev")?)
            }
        }
        .map_err(invalid(P))?;
        Ok(NetworkProfile::new(dist))
    }
}

impl EnvironmentDocument {
    fn to_environment(&self) -> Result<Environment, DocumentError> {
        let client = self.client.to_profile("environment.client")?;
        match self.kind {
            EnvironmentKind::Local => {
                for (name, present) in [("server", self.server.is_some()), ("network", self.network.is_some())] {
                    if present {
                        return Err(DocumentError::Inconsistent {
                            path: format!("environment.{name}"),
                            message: "only allowed when kind = \"remote\"".to_string(),
                        });
                    }
                }
                Ok(Environment::Local { client })
            }
            EnvironmentKind::Remote => {
                let server = self
                    .server
                    .as_ref()
                    .ok_or_else(|| missing("environment.server", "server profile"))?
                    .to_profile("environment.server")?;
                let network = self
                    .network
                    .as_ref()
                    .ok_or_else(|| missing("environment.network", "network profile"))?
                    .to_profile()?;
                Ok(Environment::Remote { client, server, network })
            }
        }
    }
}

/// A scenario together with the name it is reported under.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedScenario {
    pub label: String,
    pub document: ScenarioDocument,
    pub scenario: Scenario,
}

/// Reads a scenario from `source`: a file path, or the name of a built-in
/// fixture when no such file exists.
pub fn load(source: &str) -> Result<LoadedScenario, DocumentError> {
    let path = Path::new(source);
    let (text, default_label) = if path.exists() || builtin_fixture(source).is_none() {
        let text =
            std::fs::read_to_string(path).map_err(|e| DocumentError::Io { path: path.to_path_buf(), source: e })?;
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned());
        (text, stem.unwrap_or_else(|| source.to_string()))
    } else {
        (builtin_fixture(source).unwrap_or_default().to_string(), source.to_string())
    };
    let document = ScenarioDocument::from_toml_str(&text)?;
    let scenario = document.to_scenario()?;
    let label = document.label.clone().unwrap_or(default_label);
    Ok(LoadedScenario { label, document, scenario })
}

/// Parses and validates the scenario file at `path`.
pub fn parse_scenario(path: impl AsRef<Path>) -> Result<Scenario, DocumentError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| DocumentError::Io { path: path.to_path_buf(), source: e })?;
    ScenarioDocument::from_toml_str(&text)?.to_scenario()
}
