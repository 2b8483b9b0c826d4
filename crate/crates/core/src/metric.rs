//! The activeness quotient itself: assembly of availability, search time,
//! access time and sublibrary count, plus ranking and qualitative labels.
//!
//! The quotient keeps the historical mixed units: the search time enters as
//! its value in nanoseconds while the access time enters in seconds. The
//! result is an index, not a physical ratio; [`DcaqResult`] carries both raw
//! terms so callers can rescale.

use std::cmp::Ordering;
use std::fmt;

use crate::access_time::{local_access_time, remote_access_time, AccessTimeBreakdown};
use crate::error::{check_count, check_duration, Error, Result};
use crate::model::{Environment, Scenario};
use crate::organizedness::{organizedness_time, SearchCost};

/// `(A_c · T_s) / (T · n_s)` with `T_s` in ns and `T` in seconds.
///
/// An unavailable component scores 0 whatever the other terms are.
pub fn dcaq(available: bool, ts_ns: f64, access_time_s: f64, sublibrary_count: u64) -> Result<f64> {
    if !available {
        return Ok(0.0);
    }
    let ts_ns = check_duration("ts_ns", ts_ns)?;
    if !(access_time_s.is_finite() && access_time_s > 0.0) {
        return Err(Error::InvalidDuration { field: "access_time_s", value: access_time_s });
    }
    let n_s = check_count("sublibrary_count", sublibrary_count)?;
    Ok(ts_ns / (access_time_s * n_s as f64))
}

/// Number of sublibraries a library serves: one per machine-type/OS-type pair.
pub fn sublibrary_count(machine_types: u64, os_types: u64) -> Result<u64> {
    let m = check_count("machine_types", machine_types)?;
    let o = check_count("os_types", os_types)?;
    m.checked_mul(o).ok_or(Error::Overflow { field: "machine_types" })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrganizednessLabel {
    Poor,
    Average,
    Good,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ResponsivenessLabel {
    Low,
    High,
}

impl OrganizednessLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            OrganizednessLabel::Poor => "poor",
            OrganizednessLabel::Average => "average",
            OrganizednessLabel::Good => "good",
        }
    }
}

impl ResponsivenessLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            ResponsivenessLabel::Low => "low",
            ResponsivenessLabel::High => "high",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Classification {
    pub organizedness: OrganizednessLabel,
    pub responsiveness: ResponsivenessLabel,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} organizedness, {} responsiveness", self.organizedness.as_str(), self.responsiveness.as_str())
    }
}

/// Lower bounds of the "good/high" and "average" bands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassificationThresholds {
    high_min: f64,
    average_min: f64,
}

impl ClassificationThresholds {
    pub fn new(high_min: f64, average_min: f64) -> Result<Self> {
        let ordered = average_min.is_finite() && average_min > 0.0 && high_min > average_min;
        if !ordered || !high_min.is_finite() {
            return Err(Error::InvalidThresholds { high_min, average_min });
        }
        Ok(Self { high_min, average_min })
    }

    pub fn high_min(&self) -> f64 {
        self.high_min
    }

    pub fn average_min(&self) -> f64 {
        self.average_min
    }
}

impl Default for ClassificationThresholds {
    fn default() -> Self {
        Self { high_min: 1000.0, average_min: 100.0 }
    }
}

pub fn classify(value: f64, thresholds: &ClassificationThresholds) -> Classification {
    use OrganizednessLabel::*;
    use ResponsivenessLabel::*;
    let (organizedness, responsiveness) = if value >= thresholds.high_min {
        (Good, High)
    } else if value >= thresholds.average_min {
        (Average, Low)
    } else {
        (Poor, Low)
    };
    Classification { organizedness, responsiveness }
}

/// Where the search-time term came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TsSource {
    /// Derived from the organization and component count.
    Computed,
    /// Taken verbatim from the scenario.
    Override,
}

impl TsSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            TsSource::Computed => "computed",
            TsSource::Override => "override",
        }
    }
}

/// The metric with every intermediate term.
#[derive(Debug, Clone, PartialEq)]
pub struct DcaqResult {
    pub dcaq: f64,
    pub access_time_seconds: f64,
    pub access_time_breakdown: AccessTimeBreakdown,
    pub ts_nanoseconds: f64,
    pub ts_source: TsSource,
    /// Search cost derived from the organization, whether or not it was used.
    pub search: SearchCost,
    pub availability: u8,
    pub sublibrary_count: u64,
    /// Network rate the remote pipeline ran with, in bits/ns.
    pub network_rate: Option<f64>,
    pub classification: Classification,
}

impl DcaqResult {
    pub fn access_time_ns(&self) -> f64 {
        self.access_time_breakdown.total_ns()
    }

    /// True when the scenario's override was used and disagrees with the
    /// computed search time.
    pub fn ts_override_differs(&self) -> bool {
        self.ts_source == TsSource::Override && self.ts_nanoseconds != self.search.ts_ns
    }
}

/// Analytic access time of a scenario, using `network_rate` if given and the
/// profile's nominal rate otherwise.
pub fn scenario_access_time(
    scenario: &Scenario,
    network_rate: Option<f64>,
) -> Result<(AccessTimeBreakdown, Option<f64>)> {
    match &scenario.environment {
        Environment::Local { client } => Ok((local_access_time(&scenario.command, &scenario.component, client)?, None)),
        Environment::Remote { client, server, network } => {
            let rate = network_rate.unwrap_or_else(|| network.data_rate().nominal());
            let b = remote_access_time(&scenario.command, &scenario.component, client, server, rate)?;
            Ok((b, Some(rate)))
        }
    }
}

/// Full metric pipeline for one scenario.
///
/// `network_rate_sample` replaces the network profile's nominal rate; it is
/// ignored for local environments.
pub fn evaluate(
    scenario: &Scenario,
    thresholds: &ClassificationThresholds,
    network_rate_sample: Option<f64>,
) -> Result<DcaqResult> {
    let doocl = &scenario.doocl;
    let search = organizedness_time(doocl.organization(), doocl.component_count(), doocl.iteration_time())?;
    let (ts_nanoseconds, ts_source) = match scenario.explicit_ts_override {
        Some(ts) => (check_duration("explicit_ts_override", ts)?, TsSource::Override),
        None => (search.ts_ns, TsSource::Computed),
    };
    let (breakdown, network_rate) = scenario_access_time(scenario, network_rate_sample)?;
    let access_time_seconds = breakdown.total_seconds();
    let value = dcaq(doocl.available(), ts_nanoseconds, access_time_seconds, doocl.sublibrary_count())?;
    Ok(DcaqResult {
        dcaq: value,
        access_time_seconds,
        access_time_breakdown: breakdown,
        ts_nanoseconds,
        ts_source,
        search,
        availability: u8::from(doocl.available()),
        sublibrary_count: doocl.sublibrary_count(),
        network_rate,
        classification: classify(value, thresholds),
    })
}

/// Orders results best first: descending quotient, then ascending access
/// time, then ascending label.
pub fn rank<L: AsRef<str>>(mut results: Vec<(L, DcaqResult)>) -> Result<Vec<(L, DcaqResult)>> {
    if results.is_empty() {
        return Err(Error::EmptyInput { what: "rank" });
    }
    results.sort_by(|(la, a), (lb, b)| compare_ranked(la.as_ref(), a, lb.as_ref(), b));
    Ok(results)
}

fn compare_ranked(la: &str, a: &DcaqResult, lb: &str, b: &DcaqResult) -> Ordering {
    b.dcaq
        .total_cmp(&a.dcaq)
        .then_with(|| a.access_time_seconds.total_cmp(&b.access_time_seconds))
        .then_with(|| la.cmp(lb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::*;
    use proptest::prelude::*;

    fn illustration1() -> Scenario {
        Scenario::new(
            DooclDescriptor::new(Organization::SortedSequentialList, 16, 0.3, 5, true).unwrap(),
            Environment::Local { client: HardwareProfile::new(0.05, 0.9, 20.0, 100.0).unwrap() },
            Command::ascii("retrcomp").unwrap(),
            Component::new("C", 16, 32, 8).unwrap(),
        )
    }

    fn illustration2() -> Scenario {
        Scenario::new(
            DooclDescriptor::new(Organization::BalancedBinaryTree, 4, 0.15, 100, true).unwrap(),
            Environment::Remote {
                client: HardwareProfile::new(0.05, 0.92, 10.0, 90.0).unwrap(),
                server: HardwareProfile::new(0.2, 0.92, 10.0, 90.0).unwrap(),
                network: NetworkProfile::fixed(0.1).unwrap(),
            },
            Command::ascii("retrievecompsrvr").unwrap(),
            // 4096 bits, the payload the stage table is computed with
            Component::new("C", 16, 32, 8).unwrap(),
        )
        .with_ts_override(3.0)
        .unwrap()
    }

    #[test]
    fn dcaq_examples() {
        let v = dcaq(true, 1.2, 8.323e-5, 5).unwrap();
        assert!((v - 2883.575633785894).abs() < 1e-9, "{v}");
        assert_eq!(dcaq(false, 1.2, 8.323e-5, 5).unwrap(), 0.0);
        assert_eq!(dcaq(false, f64::NAN, -1.0, 0).unwrap(), 0.0);
        let v = dcaq(true, 3.0, 1.472172e-4, 100).unwrap();
        assert!((v - 203.7805).abs() < 1e-4, "{v}");
    }

    #[test]
    fn dcaq_rejects_invalid_inputs() {
        assert!(dcaq(true, 1.0, 0.0, 1).is_err());
        assert!(dcaq(true, 1.0, -1.0, 1).is_err());
        assert!(dcaq(true, 1.0, 1.0, 0).is_err());
        assert!(dcaq(true, -1.0, 1.0, 1).is_err());
    }

    #[test]
    fn sublibrary_count_examples() {
        assert_eq!(sublibrary_count(1, 1).unwrap(), 1);
        assert_eq!(sublibrary_count(2, 3).unwrap(), 6);
        assert_eq!(sublibrary_count(5, 1).unwrap(), 5);
        assert!(sublibrary_count(0, 3).is_err());
        assert!(sublibrary_count(3, 0).is_err());
    }

    #[test]
    fn classify_examples() {
        let t = ClassificationThresholds::default();
        let c = classify(2883.5, &t);
        assert_eq!((c.organizedness, c.responsiveness), (OrganizednessLabel::Good, ResponsivenessLabel::High));
        let c = classify(203.78, &t);
        assert_eq!((c.organizedness, c.responsiveness), (OrganizednessLabel::Average, ResponsivenessLabel::Low));
        let c = classify(0.0, &t);
        assert_eq!((c.organizedness, c.responsiveness), (OrganizednessLabel::Poor, ResponsivenessLabel::Low));
        assert_eq!(classify(1000.0, &t).organizedness, OrganizednessLabel::Good);
        assert_eq!(classify(100.0, &t).organizedness, OrganizednessLabel::Average);
    }

    #[test]
    fn thresholds_validated() {
        assert!(ClassificationThresholds::new(100.0, 100.0).is_err());
        assert!(ClassificationThresholds::new(100.0, 0.0).is_err());
        assert!(ClassificationThresholds::new(10.0, 1.0).is_ok());
    }

    #[test]
    fn evaluate_illustration1() {
        let r = evaluate(&illustration1(), &ClassificationThresholds::default(), None).unwrap();
        let stages: Vec<f64> = r.access_time_breakdown.durations().into_iter().map(|(_, d)| d).collect();
        assert_eq!(stages.len(), 3);
        assert!(((r.access_time_ns() - 83230.0) / 83230.0).abs() < 1e-12);
        assert!((r.ts_nanoseconds - 1.2).abs() < 1e-12);
        assert!((2883.4..=2883.7).contains(&r.dcaq), "{}", r.dcaq);
        assert_eq!(r.classification.organizedness, OrganizednessLabel::Good);
        assert_eq!(r.network_rate, None);
        assert_eq!(r.ts_source, TsSource::Computed);
    }

    #[test]
    fn evaluate_illustration2_with_and_without_override() {
        let t = ClassificationThresholds::default();
        let r = evaluate(&illustration2(), &t, None).unwrap();
        assert!((203.77..=203.79).contains(&r.dcaq), "{}", r.dcaq);
        assert!(r.ts_override_differs());
        assert_eq!(r.classification.organizedness, OrganizednessLabel::Average);

        let r = evaluate(&illustration2().without_ts_override(), &t, None).unwrap();
        assert!((r.ts_nanoseconds - 0.3).abs() < 1e-12);
        assert!((r.dcaq - 20.378).abs() <= 1e-3, "{}", r.dcaq);
        assert_eq!(r.classification.organizedness, OrganizednessLabel::Poor);
    }

    #[test]
    fn evaluate_unavailable_still_reports_breakdown() {
        let mut s = illustration1();
        s.doocl = s.doocl.with_available(false);
        let r = evaluate(&s, &ClassificationThresholds::default(), None).unwrap();
        assert_eq!(r.dcaq, 0.0);
        assert_eq!(r.availability, 0);
        assert_eq!(r.access_time_breakdown.stages().len(), 3);
    }

    #[test]
    fn evaluate_uses_rate_sample_for_remote_only() {
        let t = ClassificationThresholds::default();
        let r = evaluate(&illustration2(), &t, Some(0.2)).unwrap();
        assert_eq!(r.network_rate, Some(0.2));
        assert!((r.access_time_ns() - 126097.2).abs() < 1e-6);
        let r = evaluate(&illustration1(), &t, Some(0.2)).unwrap();
        assert_eq!(r.network_rate, None);
    }

    fn with_dcaq(value: f64, seconds: f64) -> DcaqResult {
        let mut r = evaluate(&illustration1(), &ClassificationThresholds::default(), None).unwrap();
        r.dcaq = value;
        r.access_time_seconds = seconds;
        r
    }

    #[test]
    fn rank_examples() {
        let ranked = rank(vec![("B", with_dcaq(203.78, 1.0)), ("A", with_dcaq(2883.6, 1.0))]).unwrap();
        assert_eq!(ranked.iter().map(|(l, _)| *l).collect::<Vec<_>>(), ["A", "B"]);

        let ranked = rank(vec![("A", with_dcaq(1.0, 1.0))]).unwrap();
        assert_eq!(ranked.len(), 1);

        let ranked = rank(vec![("A", with_dcaq(100.0, 2.0)), ("B", with_dcaq(100.0, 1.0))]).unwrap();
        assert_eq!(ranked.iter().map(|(l, _)| *l).collect::<Vec<_>>(), ["B", "A"]);

        let ranked = rank(vec![("b", with_dcaq(5.0, 1.0)), ("a", with_dcaq(5.0, 1.0))]).unwrap();
        assert_eq!(ranked.iter().map(|(l, _)| *l).collect::<Vec<_>>(), ["a", "b"]);
    }

    #[test]
    fn rank_rejects_empty() {
        assert!(rank(Vec::<(String, DcaqResult)>::new()).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn unavailable_iff_zero(ts in 1e-6f64..1e6, t in 1e-9f64..1e3, n in 1u64..10_000) {
            prop_assert_eq!(dcaq(false, ts, t, n).unwrap(), 0.0);
            prop_assert!(dcaq(true, ts, t, n).unwrap() > 0.0);
        }

        #[test]
        fn strictly_monotone(ts in 1e-6f64..1e6, t in 1e-9f64..1e3, n in 1u64..10_000, f in 1.001f64..100.0) {
            let base = dcaq(true, ts, t, n).unwrap();
            prop_assert!(dcaq(true, ts * f, t, n).unwrap() > base);
            prop_assert!(dcaq(true, ts, t * f, n).unwrap() < base);
            prop_assert!(dcaq(true, ts, t, n + 1).unwrap() < base);
        }

        #[test]
        fn scales_with_ts(ts in 1e-6f64..1e6, t in 1e-9f64..1e3, n in 1u64..10_000, k in 1e-3f64..1e3) {
            let base = dcaq(true, ts, t, n).unwrap();
            let scaled = dcaq(true, k * ts, t, n).unwrap();
            prop_assert!(((scaled - k * base) / (k * base)).abs() < 1e-12);
        }

        #[test]
        fn classify_is_order_preserving(x in 0.0f64..1e5, y in 0.0f64..1e5) {
            let t = ClassificationThresholds::default();
            let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
            prop_assert!(classify(hi, &t) >= classify(lo, &t));
        }

        #[test]
        fn rank_is_deterministic_permutation(
            entries in proptest::collection::vec((0u8..4, 0u8..4, "[a-c]{1,2}"), 1..20)
        ) {
            let input: Vec<(String, DcaqResult)> = entries
                .iter()
                .map(|(d, t, l)| (l.clone(), with_dcaq(f64::from(*d), f64::from(*t) + 1.0)))
                .collect();
            let mut reversed = input.clone();
            reversed.reverse();
            let a = rank(input.clone()).unwrap();
            let b = rank(reversed).unwrap();
            prop_assert_eq!(&a, &b);
            let mut labels_in: Vec<_> = input.iter().map(|(l, r)| (l.clone(), r.dcaq.to_bits())).collect();
            let mut labels_out: Vec<_> = a.iter().map(|(l, r)| (l.clone(), r.dcaq.to_bits())).collect();
            labels_in.sort();
            labels_out.sort();
            prop_assert_eq!(labels_in, labels_out);
            for w in a.windows(2) {
                prop_assert!(w[0].1.dcaq >= w[1].1.dcaq);
            }
        }
    }
}
