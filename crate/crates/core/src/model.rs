//! Domain values shared by every stage of the pipeline.
//!
//! Canonical units throughout: bits (integers), nanoseconds and bits per
//! nanosecond (`f64`). Unit conversion happens only at the document boundary.
//! Every type validates on construction and is immutable afterwards.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_count, check_duration, check_positive_duration, check_rate, check_ratio, Error, Result};

/// A retrievable artifact of the library. Its size is the number of bits the
/// pipeline has to move.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Component {
    name: String,
    lines: u64,
    chars_per_line: u64,
    bits_per_char: u64,
    bits: u64,
}

impl Component {
    pub fn new(name: impl Into<String>, lines: u64, chars_per_line: u64, bits_per_char: u64) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::Empty { field: "name" });
        }
        check_count("lines", lines)?;
        check_count("chars_per_line", chars_per_line)?;
        check_count("bits_per_char", bits_per_char)?;
        let bits = lines
            .checked_mul(chars_per_line)
            .and_then(|b| b.checked_mul(bits_per_char))
            .ok_or(Error::Overflow { field: "lines" })?;
        Ok(Self { name, lines, chars_per_line, bits_per_char, bits })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn lines(&self) -> u64 {
        self.lines
    }

    pub fn chars_per_line(&self) -> u64 {
        self.chars_per_line
    }

    pub fn bits_per_char(&self) -> u64 {
        self.bits_per_char
    }

    /// `lines × chars_per_line × bits_per_char`, exact.
    pub fn bits(&self) -> u64 {
        self.bits
    }
}

/// Size of a component payload in bits.
pub fn component_bits(component: &Component) -> u64 {
    component.bits()
}

/// The retrieval command typed by the requester.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Command {
    text: String,
    bits_per_char: u64,
    bits: u64,
}

impl Command {
    pub const DEFAULT_BITS_PER_CHAR: u64 = 8;

    pub fn new(text: impl Into<String>, bits_per_char: u64) -> Result<Self> {
        let text = text.into();
        if text.is_empty() {
            return Err(Error::Empty { field: "text" });
        }
        check_count("bits_per_char", bits_per_char)?;
        let bits = (text.chars().count() as u64).checked_mul(bits_per_char).ok_or(Error::Overflow { field: "text" })?;
        Ok(Self { text, bits_per_char, bits })
    }

    /// Command with the default 8 bits per character.
    pub fn ascii(text: impl Into<String>) -> Result<Self> {
        Self::new(text, Self::DEFAULT_BITS_PER_CHAR)
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn bits_per_char(&self) -> u64 {
        self.bits_per_char
    }

    /// Character count × bits per character.
    pub fn bits(&self) -> u64 {
        self.bits
    }
}

/// Size of a command in bits.
pub fn command_bits(command: &Command) -> u64 {
    command.bits()
}

/// Bus rate and memory-hierarchy timings of one machine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardwareProfile {
    bus_rate: f64,
    hit_ratio: f64,
    cache_time: f64,
    memory_time: f64,
}

impl HardwareProfile {
    /// `bus_rate` in bits/ns, `cache_time` and `memory_time` in ns.
    pub fn new(bus_rate: f64, hit_ratio: f64, cache_time: f64, memory_time: f64) -> Result<Self> {
        Ok(Self {
            bus_rate: check_rate("bus_rate", bus_rate)?,
            hit_ratio: check_ratio("hit_ratio", hit_ratio)?,
            cache_time: check_duration("cache_time", cache_time)?,
            memory_time: check_duration("memory_time", memory_time)?,
        })
    }

    pub fn bus_rate(&self) -> f64 {
        self.bus_rate
    }

    pub fn hit_ratio(&self) -> f64 {
        self.hit_ratio
    }

    pub fn cache_time(&self) -> f64 {
        self.cache_time
    }

    pub fn memory_time(&self) -> f64 {
        self.memory_time
    }
}

/// How the network data rate is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateDistribution {
    Fixed(f64),
    Uniform {
        lo: f64,
        hi: f64,
    },
    /// Normal distribution truncated to strictly positive values.
    Normal {
        mean: f64,
        stddev: f64,
    },
}

impl RateDistribution {
    pub fn fixed(rate: f64) -> Result<Self> {
        Ok(Self::Fixed(check_rate("data_rate", rate)?))
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        check_rate("lo", lo)?;
        check_rate("hi", hi)?;
        if lo > hi {
            return Err(Error::InvalidDistribution(format!("uniform bounds out of order: lo {lo} > hi {hi}")));
        }
        Ok(Self::Uniform { lo, hi })
    }

    pub fn normal(mean: f64, stddev: f64) -> Result<Self> {
        check_rate("mean", mean)?;
        if !(stddev.is_finite() && stddev >= 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "normal stddev must be finite and non-negative, got {stddev}"
            )));
        }
        Ok(Self::Normal { mean, stddev })
    }

    pub fn is_fixed(&self) -> bool {
        match *self {
            Self::Fixed(_) => true,
            Self::Uniform { lo, hi } => lo == hi,
            Self::Normal { stddev, .. } => stddev == 0.0,
        }
    }

    /// Representative rate used when no sample is supplied: the fixed value,
    /// the uniform midpoint, or the normal mean.
    pub fn nominal(&self) -> f64 {
        match *self {
            Self::Fixed(r) => r,
            Self::Uniform { lo, hi } => lo + (hi - lo) / 2.0,
            Self::Normal { mean, .. } => mean,
        }
    }

    /// Closed bounds every sample is guaranteed to fall in. The truncated
    /// normal's lower bound is 0 (exclusive in practice) and it is unbounded above.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            Self::Fixed(r) => (r, r),
            Self::Uniform { lo, hi } => (lo, hi),
            Self::Normal { stddev: 0.0, mean } => (mean, mean),
            Self::Normal { .. } => (0.0, f64::INFINITY),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkProfile {
    data_rate: RateDistribution,
}

impl NetworkProfile {
    pub fn new(data_rate: RateDistribution) -> Self {
        Self { data_rate }
    }

    pub fn fixed(rate: f64) -> Result<Self> {
        Ok(Self::new(RateDistribution::fixed(rate)?))
    }

    pub fn data_rate(&self) -> RateDistribution {
        self.data_rate
    }
}

/// Where the requester sits relative to the library.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Environment {
    Local {
        client: HardwareProfile,
    },
    /// The server's bus rate is the rate at which the component reaches the
    /// server's network interface.
    Remote {
        client: HardwareProfile,
        server: HardwareProfile,
        network: NetworkProfile,
    },
}

impl Environment {
    pub fn client(&self) -> &HardwareProfile {
        match self {
            Environment::Local { client } | Environment::Remote { client, .. } => client,
        }
    }

    pub fn is_remote(&self) -> bool {
        matches!(self, Environment::Remote { .. })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Environment::Local { .. } => "local",
            Environment::Remote { .. } => "remote",
        }
    }
}

/// Storage organization of a library, which fixes its search algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Organization {
    /// Alphabetically sorted list searched by binary search.
    SortedSequentialList,
    /// Alphabetically ordered balanced binary tree.
    BalancedBinaryTree,
    /// Unordered list searched by a linear scan.
    UnsortedSequentialList,
}

impl Organization {
    pub const ALL: [Organization; 3] =
        [Organization::SortedSequentialList, Organization::BalancedBinaryTree, Organization::UnsortedSequentialList];

    pub fn as_str(&self) -> &'static str {
        match self {
            Organization::SortedSequentialList => "sorted_sequential_list",
            Organization::BalancedBinaryTree => "balanced_binary_tree",
            Organization::UnsortedSequentialList => "unsorted_sequential_list",
        }
    }

    /// Whether the search halves the candidate set at each step.
    pub fn is_logarithmic(&self) -> bool {
        !matches!(self, Organization::UnsortedSequentialList)
    }
}

impl fmt::Display for Organization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Organization {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Organization::ALL.into_iter().find(|o| o.as_str() == s).ok_or_else(|| format!("unknown organization `{s}`"))
    }
}

/// Description of the library being measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DooclDescriptor {
    organization: Organization,
    component_count: u64,
    iteration_time: f64,
    sublibrary_count: u64,
    available: bool,
}

impl DooclDescriptor {
    /// `component_count` is the size of the searched sublibrary;
    /// `iteration_time` is the cost of one search step in ns.
    pub fn new(
        organization: Organization,
        component_count: u64,
        iteration_time: f64,
        sublibrary_count: u64,
        available: bool,
    ) -> Result<Self> {
        Ok(Self {
            organization,
            component_count: check_count("component_count", component_count)?,
            iteration_time: check_positive_duration("iteration_time", iteration_time)?,
            sublibrary_count: check_count("sublibrary_count", sublibrary_count)?,
            available,
        })
    }

    pub fn organization(&self) -> Organization {
        self.organization
    }

    pub fn component_count(&self) -> u64 {
        self.component_count
    }

    pub fn iteration_time(&self) -> f64 {
        self.iteration_time
    }

    pub fn sublibrary_count(&self) -> u64 {
        self.sublibrary_count
    }

    pub fn available(&self) -> bool {
        self.available
    }

    pub fn with_available(self, available: bool) -> Self {
        Self { available, ..self }
    }

    pub fn with_sublibrary_count(self, sublibrary_count: u64) -> Result<Self> {
        Ok(Self { sublibrary_count: check_count("sublibrary_count", sublibrary_count)?, ..self })
    }
}

/// Complete input to one metric evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub doocl: DooclDescriptor,
    pub environment: Environment,
    pub command: Command,
    pub component: Component,
    /// Search time in ns used verbatim instead of the organizedness model.
    pub explicit_ts_override: Option<f64>,
}

impl Scenario {
    pub fn new(doocl: DooclDescriptor, environment: Environment, command: Command, component: Component) -> Self {
        Self { doocl, environment, command, component, explicit_ts_override: None }
    }

    pub fn with_ts_override(mut self, ts_ns: f64) -> Result<Self> {
        self.explicit_ts_override = Some(check_duration("explicit_ts_override", ts_ns)?);
        Ok(self)
    }

    pub fn without_ts_override(mut self) -> Self {
        self.explicit_ts_override = None;
        self
    }
}
