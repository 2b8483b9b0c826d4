//! Empirical oracle for the analytic models.
//!
//! Three independent checks live here:
//!
//! * real searches over synthetic libraries, counting probes, to confirm the
//!   step counts used for the search-time term;
//! * a chunked replay of the retrieval pipeline that accumulates elapsed time
//!   hop by hop, sharing no code with [`crate::access_time`];
//! * seeded Monte Carlo sampling of the network rate to measure how much the
//!   quotient moves when network conditions vary.
//!
//! Randomness comes from `ChaCha8Rng`. Trial `i` of a run seeded with `s`
//! draws from stream `i` of the generator seeded with `s`, so trials are
//! independent and the run is reproducible regardless of thread count.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};
use rayon::prelude::*;

use crate::error::{check_count, check_rate, Error, Result};
use crate::metric::{evaluate, ClassificationThresholds};
use crate::model::{Environment, HardwareProfile, Organization, RateDistribution, Scenario};

/// Name of the generator recorded in Monte Carlo output.
pub const GENERATOR: &str = "ChaCha8Rng";

/// Give up on the truncated normal after this many non-positive draws.
pub const MAX_TRUNCATION_ATTEMPTS: u64 = 1_000_000;

/// Bits moved per step when replaying a transfer.
const REPLAY_CHUNK_BITS: u64 = 512;

/// Identifier of a component in a synthetic library.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentKey(pub u64);

impl std::fmt::Display for ComponentKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "c{:016x}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct TreeNode {
    key: ComponentKey,
    left: Option<usize>,
    right: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Layout {
    /// Ascending keys.
    Sorted(Vec<ComponentKey>),
    /// Keys in random order.
    Unsorted(Vec<ComponentKey>),
    /// Node arena of a height-balanced search tree.
    Tree { nodes: Vec<TreeNode>, root: usize },
}

/// A concrete library of unique keys laid out according to its organization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntheticLibrary {
    organization: Organization,
    layout: Layout,
    size: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOutcome {
    pub found: bool,
    pub probes: u64,
}

/// Builds a library of `n` unique keys. The same `(organization, n, seed)`
/// always produces the same library.
pub fn build_library(organization: Organization, n: u64, seed: u64) -> Result<SyntheticLibrary> {
    let n = check_count("n", n)?;
    let size = usize::try_from(n).map_err(|_| Error::Overflow { field: "n" })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keys = BTreeSet::new();
    while keys.len() < size {
        keys.insert(ComponentKey(rng.random()));
    }
    let sorted: Vec<ComponentKey> = keys.into_iter().collect();
    let layout = match organization {
        Organization::SortedSequentialList => Layout::Sorted(sorted),
        Organization::UnsortedSequentialList => {
            let mut keys = sorted;
            keys.shuffle(&mut rng);
            Layout::Unsorted(keys)
        }
        Organization::BalancedBinaryTree => {
            let mut nodes = Vec::with_capacity(size);
            let root = build_subtree(&sorted, &mut nodes).expect("non-empty key set");
            Layout::Tree { nodes, root }
        }
    };
    Ok(SyntheticLibrary { organization, layout, size })
}

/// Median split; returns the index of the subtree root.
fn build_subtree(keys: &[ComponentKey], nodes: &mut Vec<TreeNode>) -> Option<usize> {
    if keys.is_empty() {
        return None;
    }
    let mid = keys.len() / 2;
    let left = build_subtree(&keys[..mid], nodes);
    let right = build_subtree(&keys[mid + 1..], nodes);
    nodes.push(TreeNode { key: keys[mid], left, right });
    Some(nodes.len() - 1)
}

impl SyntheticLibrary {
    pub fn organization(&self) -> Organization {
        self.organization
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Keys in storage order (tree keys in ascending order).
    pub fn keys(&self) -> Vec<ComponentKey> {
        match &self.layout {
            Layout::Sorted(k) | Layout::Unsorted(k) => k.clone(),
            Layout::Tree { nodes, root } => {
                let mut out = Vec::with_capacity(nodes.len());
                in_order(nodes, Some(*root), &mut out);
                out
            }
        }
    }

    /// Number of levels of the tree, or `None` for list layouts.
    pub fn tree_height(&self) -> Option<u64> {
        match &self.layout {
            Layout::Tree { nodes, root } => Some(height(nodes, Some(*root))),
            _ => None,
        }
    }

    /// Largest probe count over searches for every present key.
    pub fn worst_case_probes(&self) -> u64 {
        self.keys().into_iter().map(|k| empirical_search(self, k).probes).max().unwrap_or(0)
    }

    /// A key that is not in the library.
    pub fn absent_key(&self) -> ComponentKey {
        let present: BTreeSet<_> = self.keys().into_iter().collect();
        (0..).map(ComponentKey).find(|k| !present.contains(k)).expect("key space exhausted")
    }
}

fn in_order(nodes: &[TreeNode], at: Option<usize>, out: &mut Vec<ComponentKey>) {
    if let Some(i) = at {
        in_order(nodes, nodes[i].left, out);
        out.push(nodes[i].key);
        in_order(nodes, nodes[i].right, out);
    }
}

fn height(nodes: &[TreeNode], at: Option<usize>) -> u64 {
    match at {
        None => 0,
        Some(i) => 1 + height(nodes, nodes[i].left).max(height(nodes, nodes[i].right)),
    }
}

/// Runs the library's search algorithm for `key` and counts probes.
///
/// * Sorted list: bisection that halves the candidate range with one ordering
///   comparison per probe until a single candidate remains, then tests that
///   candidate for identity. The identity test only counts as a probe in a
///   one-key library, where no narrowing happens.
/// * Balanced tree: descent from the root; each node visited is one probe.
/// * Unsorted list: front-to-back scan; each element inspected is one probe.
pub fn empirical_search(library: &SyntheticLibrary, key: ComponentKey) -> SearchOutcome {
    match &library.layout {
        Layout::Sorted(keys) => bisect(keys, key),
        Layout::Unsorted(keys) => {
            let mut probes = 0;
            for k in keys {
                probes += 1;
                if *k == key {
                    return SearchOutcome { found: true, probes };
                }
            }
            SearchOutcome { found: false, probes }
        }
        Layout::Tree { nodes, root } => {
            let mut probes = 0;
            let mut at = Some(*root);
            while let Some(i) = at {
                probes += 1;
                at = match key.cmp(&nodes[i].key) {
                    Ordering::Equal => return SearchOutcome { found: true, probes },
                    Ordering::Less => nodes[i].left,
                    Ordering::Greater => nodes[i].right,
                };
            }
            SearchOutcome { found: false, probes }
        }
    }
}

fn bisect(keys: &[ComponentKey], key: ComponentKey) -> SearchOutcome {
    let mut base = 0;
    let mut len = keys.len();
    let mut probes = 0;
    while len > 1 {
        let half = len / 2;
        probes += 1;
        if keys[base + half] <= key {
            base += half;
        }
        len -= half;
    }
    let found = keys.get(base) == Some(&key);
    SearchOutcome { found, probes: probes.max(1) }
}

/// Replays the retrieval pipeline hop by hop at network rate `rate_sample`
/// and returns the elapsed time in ns.
pub fn replay_transfer(scenario: &Scenario, rate_sample: f64) -> Result<f64> {
    let command_bits = scenario.command.bits();
    let component_bits = scenario.component.bits();
    let mut clock = ReplayClock::default();
    match &scenario.environment {
        Environment::Local { client } => {
            clock.send(command_bits, client.bus_rate())?;
            clock.lookup(client);
            clock.send(component_bits, client.bus_rate())?;
        }
        Environment::Remote { client, server, .. } => {
            let network = check_rate("rate_sample", rate_sample)?;
            clock.send(command_bits, client.bus_rate())?;
            clock.send(command_bits, network)?;
            clock.lookup(server);
            clock.send(component_bits, server.bus_rate())?;
            clock.send(component_bits, network)?;
            clock.send(component_bits, client.bus_rate())?;
        }
    }
    Ok(clock.now_ns)
}

#[derive(Debug, Default)]
struct ReplayClock {
    now_ns: f64,
}

impl ReplayClock {
    /// Moves `bits` across a link in fixed-size chunks.
    fn send(&mut self, bits: u64, rate: f64) -> Result<()> {
        let rate = check_rate("rate", rate)?;
        let mut remaining = bits;
        let mut hop = 0.0;
        while remaining > 0 {
            let chunk = remaining.min(REPLAY_CHUNK_BITS);
            hop += chunk as f64 / rate;
            remaining -= chunk;
        }
        self.now_ns += hop;
        Ok(())
    }

    /// Cache probe always costs `t_c`; misses add a memory access.
    fn lookup(&mut self, hw: &HardwareProfile) {
        let miss_ratio = 1.0 - hw.hit_ratio();
        self.now_ns += hw.cache_time() + miss_ratio * hw.memory_time();
    }
}

/// Draws one network rate from `distribution`.
pub fn sample_rate<R: Rng + ?Sized>(distribution: &RateDistribution, rng: &mut R) -> Result<f64> {
    match *distribution {
        RateDistribution::Fixed(r) => Ok(r),
        RateDistribution::Uniform { lo, hi } => {
            let u = Uniform::new_inclusive(lo, hi).map_err(|e| Error::InvalidDistribution(e.to_string()))?;
            Ok(u.sample(rng))
        }
        RateDistribution::Normal { mean, stddev } => {
            let normal = Normal::new(mean, stddev).map_err(|e| Error::InvalidDistribution(e.to_string()))?;
            for _ in 0..MAX_TRUNCATION_ATTEMPTS {
                let r = normal.sample(rng);
                if r > 0.0 && r.is_finite() {
                    return Ok(r);
                }
            }
            Err(Error::SamplerExhausted { attempts: MAX_TRUNCATION_ATTEMPTS })
        }
    }
}

/// One Monte Carlo trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McTrial {
    pub index: u64,
    /// Sampled network rate in bits/ns, `None` for local scenarios.
    pub rate: Option<f64>,
    pub dcaq: f64,
    pub access_time_ns: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McWarning {
    /// Every trial used the same rate, so the spread is zero by construction.
    DegenerateDistribution,
}

impl McWarning {
    pub fn message(&self) -> &'static str {
        match self {
            McWarning::DegenerateDistribution => "network rate is not random; every trial is identical and stddev is 0",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantiles {
    pub p5: f64,
    pub p50: f64,
    pub p95: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McSummary {
    pub trials: u64,
    pub mean: f64,
    /// Sample standard deviation (n − 1 denominator), 0 for a single trial.
    pub stddev: f64,
    pub min: f64,
    pub max: f64,
    pub quantiles: Quantiles,
    pub seed: u64,
    pub generator: &'static str,
    pub warnings: Vec<McWarning>,
}

fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs `trials` independent evaluations with a freshly sampled network rate
/// each. Results are ordered by trial index.
pub fn monte_carlo_trials(scenario: &Scenario, trials: u64, seed: u64) -> Result<Vec<McTrial>> {
    check_count("trials", trials)?;
    let thresholds = ClassificationThresholds::default();
    (0..trials)
        .into_par_iter()
        .map(|index| {
            let rate = match &scenario.environment {
                Environment::Local { .. } => None,
                Environment::Remote { network, .. } => {
                    Some(sample_rate(&network.data_rate(), &mut trial_rng(seed, index))?)
                }
            };
            let r = evaluate(scenario, &thresholds, rate)?;
            Ok(McTrial { index, rate, dcaq: r.dcaq, access_time_ns: r.access_time_ns() })
        })
        .collect()
}

/// Monte Carlo spread of the quotient under the scenario's network-rate
/// distribution.
pub fn monte_carlo_dcaq(scenario: &Scenario, trials: u64, seed: u64) -> Result<McSummary> {
    let samples = monte_carlo_trials(scenario, trials, seed)?;
    let values: Vec<f64> = samples.iter().map(|t| t.dcaq).collect();
    let degenerate = match &scenario.environment {
        Environment::Local { .. } => true,
        Environment::Remote { network, .. } => network.data_rate().is_fixed(),
    };
    let warnings = if degenerate && trials > 1 { vec![McWarning::DegenerateDistribution] } else { Vec::new() };
    Ok(summarize(&values, seed, warnings))
}

/// Welford mean and variance in index order, then order statistics.
pub fn summarize(values: &[f64], seed: u64, warnings: Vec<McWarning>) -> McSummary {
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (i, &x) in values.iter().enumerate() {
        let delta = x - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (x - mean);
    }
    let n = values.len();
    let stddev = if n > 1 { (m2 / (n - 1) as f64).sqrt() } else { 0.0 };
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (min, max) = match (sorted.first(), sorted.last()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => (f64::NAN, f64::NAN),
    };
    McSummary {
        trials: n as u64,
        mean,
        stddev,
        min,
        max,
        quantiles: Quantiles {
            p5: quantile(&sorted, 0.05),
            p50: quantile(&sorted, 0.50),
            p95: quantile(&sorted, 0.95),
        },
        seed,
        generator: GENERATOR,
        warnings,
    }
}

/// Linear interpolation between closest ranks of an ascending slice.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    match sorted.len() {
        0 => f64::NAN,
        1 => sorted[0],
        n => {
            let pos = q * (n - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = pos.ceil() as usize;
            let frac = pos - lo as f64;
            // clamp guards against interpolation rounding past a neighbour
            (sorted[lo] + frac * (sorted[hi] - sorted[lo])).clamp(sorted[lo], sorted[hi])
        }
    }
}
