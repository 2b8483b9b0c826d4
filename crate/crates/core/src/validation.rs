//! Oracle agreement suites behind `dcaq validate`.
//!
//! Each suite compares an analytic quantity with what the simulator measures
//! and reports the number of checks and the first disagreement.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::metric::scenario_access_time;
use crate::model::{
    Command, Component, DooclDescriptor, Environment, HardwareProfile, NetworkProfile, Organization, Scenario,
};
use crate::organizedness::{ceil_log2, search_iterations};
use crate::simulator::{build_library, empirical_search, replay_transfer};

/// Deliberate defects for negative-control runs.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InjectedFault {
    /// Expected search steps are off by one.
    SearchCountOffByOne,
    /// Analytic totals are inflated by one part in a million.
    ReplayBias,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidateOptions {
    /// Library sizes 1..=max_n are checked.
    pub max_n: u64,
    /// Relative tolerance for replay against analytic totals.
    pub tolerance: f64,
    pub replay_scenarios: u64,
    pub seed: u64,
    #[doc(hidden)]
    pub fault: Option<InjectedFault>,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self { max_n: 1024, tolerance: 1e-9, replay_scenarios: 10_000, seed: 0x5eed, fault: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
    /// Largest relative error seen, for tolerance-based suites.
    pub max_rel_error: Option<f64>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        Self { name, checks: 0, failures: 0, first_failure: None, max_rel_error: None }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checks > 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub options: ValidateOptions,
    pub suites: Vec<SuiteReport>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }
}

pub fn run_validation(options: &ValidateOptions) -> Result<ValidationReport> {
    let suites = vec![
        sorted_search_suite(options)?,
        tree_search_suite(options)?,
        linear_search_suite(options)?,
        replay_suite(options)?,
    ];
    Ok(ValidationReport { options: options.clone(), suites })
}

fn expected_steps(options: &ValidateOptions, organization: Organization, n: u64) -> Result<u64> {
    let steps = search_iterations(organization, n)?;
    Ok(match options.fault {
        Some(InjectedFault::SearchCountOffByOne) => steps + 1,
        _ => steps,
    })
}

/// Binary search over sorted arrays of every size up to `max_n`.
fn sorted_search_suite(options: &ValidateOptions) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("search steps: sorted list (binary search)");
    let org = Organization::SortedSequentialList;
    for n in 1..=options.max_n {
        let lib = build_library(org, n, options.seed ^ n)?;
        let want = expected_steps(options, org, n)?;
        let keys = lib.keys();
        let all_found = keys.iter().all(|&k| empirical_search(&lib, k).found);
        let absent = !empirical_search(&lib, lib.absent_key()).found;
        let worst = lib.worst_case_probes();
        suite.check(worst == want && all_found && absent, || {
            format!(
                "N = {n}: worst-case probes {worst}, expected {want}, all found {all_found}, absent rejected {absent}"
            )
        });
    }
    Ok(suite)
}

/// Root-to-leaf descent of balanced trees. Node visits equal the tree height,
/// which is the formula's step count or one more at powers of two.
fn tree_search_suite(options: &ValidateOptions) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("search steps: balanced tree (descent)");
    let org = Organization::BalancedBinaryTree;
    for n in 1..=options.max_n {
        let lib = build_library(org, n, options.seed ^ n)?;
        let steps = expected_steps(options, org, n)?;
        let height = lib.tree_height().unwrap_or(0);
        let worst = lib.worst_case_probes();
        let balanced = height == ceil_log2(n + 1);
        let bracketed = steps <= worst && worst <= steps + 1;
        suite.check(worst == height && balanced && bracketed, || {
            format!("N = {n}: worst-case probes {worst}, height {height}, formula {steps}")
        });
    }
    Ok(suite)
}

/// Linear scans touch every key in the worst case.
fn linear_search_suite(options: &ValidateOptions) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("search steps: unsorted list (linear scan)");
    let org = Organization::UnsortedSequentialList;
    for n in 1..=options.max_n {
        let lib = build_library(org, n, options.seed ^ n)?;
        let want = expected_steps(options, org, n)?;
        let worst = lib.worst_case_probes();
        suite.check(worst == want, || format!("N = {n}: worst-case probes {worst}, expected {want}"));
    }
    Ok(suite)
}

fn random_hardware(rng: &mut ChaCha8Rng) -> Result<HardwareProfile> {
    HardwareProfile::new(
        10f64.powf(rng.random_range(-3.0..1.0)),
        rng.random_range(0.0..=1.0),
        rng.random_range(0.0..200.0),
        rng.random_range(0.0..2000.0),
    )
}

/// A random but valid scenario; half local, half remote.
pub fn random_scenario(rng: &mut ChaCha8Rng) -> Result<(Scenario, Option<f64>)> {
    let client = random_hardware(rng)?;
    let (environment, rate) = if rng.random_bool(0.5) {
        (Environment::Local { client }, None)
    } else {
        let rate = 10f64.powf(rng.random_range(-3.0..1.0));
        let env = Environment::Remote { client, server: random_hardware(rng)?, network: NetworkProfile::fixed(rate)? };
        (env, Some(rate))
    };
    let scenario = Scenario::new(
        DooclDescriptor::new(
            Organization::ALL[rng.random_range(0..3)],
            rng.random_range(1..100_000),
            rng.random_range(0.01..10.0),
            rng.random_range(1..500),
            true,
        )?,
        environment,
        Command::new("retrieve", rng.random_range(1..=32))?,
        Component::new("c", rng.random_range(1..5_000), rng.random_range(1..200), rng.random_range(1..=32))?,
    );
    Ok((scenario, rate))
}

/// Stepwise replay against the closed-form totals.
fn replay_suite(options: &ValidateOptions) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("replay vs analytic access time");
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut max_rel = 0.0f64;
    let bias = match options.fault {
        Some(InjectedFault::ReplayBias) => 1.0 + 1e-6,
        _ => 1.0,
    };
    for i in 0..options.replay_scenarios {
        let (scenario, rate) = random_scenario(&mut rng)?;
        let analytic = scenario_access_time(&scenario, rate)?.0.total_ns() * bias;
        let replayed = replay_transfer(&scenario, rate.unwrap_or(1.0))?;
        let rel = ((replayed - analytic) / analytic).abs();
        max_rel = max_rel.max(rel);
        suite.check(rel <= options.tolerance, || {
            format!("scenario {i}: replay {replayed} ns, analytic {analytic} ns, relative error {rel:e}")
        });
    }
    suite.max_rel_error = Some(max_rel);
    Ok(suite)
}
