//! Human-readable and machine-readable reports.
//!
//! Machine output is a flat list of `key = value` lines in a fixed order. It
//! parses as TOML. Floats are written with 17 significant digits so values
//! round-trip exactly and identical runs produce identical bytes.

use std::fmt::{self, Write as _};

use crate::access_time::StageInputs;
use crate::document::LoadedScenario;
use crate::metric::{DcaqResult, TsSource};
use crate::model::{Environment, HardwareProfile, RateDistribution, Scenario};
use crate::simulator::McSummary;
use crate::validation::ValidationReport;

pub const SCHEMA: &str = "dcaq-report/1";

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Str(String),
    Int(u64),
    Float(f64),
    Bool(bool),
}

/// Ordered flat key/value document.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MachineReport {
    entries: Vec<(String, Value)>,
}

impl MachineReport {
    pub fn new(command: &str) -> Self {
        let mut r = Self::default();
        r.str("schema", SCHEMA);
        r.str("command", command);
        r
    }

    pub fn str(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.entries.push((key.into(), Value::Str(value.into())));
        self
    }

    pub fn int(&mut self, key: impl Into<String>, value: u64) -> &mut Self {
        self.entries.push((key.into(), Value::Int(value)));
        self
    }

    pub fn float(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.entries.push((key.into(), Value::Float(value)));
        self
    }

    pub fn bool(&mut self, key: impl Into<String>, value: bool) -> &mut Self {
        self.entries.push((key.into(), Value::Bool(value)));
        self
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(k, _)| k.as_str())
    }
}

/// 17 significant digits; TOML spellings for non-finite values.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if c.is_control() => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

impl fmt::Display for MachineReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (key, value) in &self.entries {
            match value {
                Value::Str(s) => writeln!(f, "{key} = {}", quote(s))?,
                Value::Int(i) => writeln!(f, "{key} = {i}")?,
                Value::Float(x) => writeln!(f, "{key} = {}", format_float(*x))?,
                Value::Bool(b) => writeln!(f, "{key} = {b}")?,
            }
        }
        Ok(())
    }
}

/// Compact number for people: up to 10 significant digits, no trailing zeros.
pub fn human(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-4..12).contains(&magnitude) {
        let s = format!("{x:.6e}");
        let (mantissa, exp) = s.split_once('e').unwrap_or((&s, "0"));
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        return format!("{mantissa}e{exp}");
    }
    let decimals = (9 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// `83230 ns = 83.23 µs = 0.08323 ms = 8.323e-5 s`
pub fn duration_units(ns: f64) -> String {
    format!("{} ns = {} µs = {} ms = {} s", human(ns), human(ns / 1e3), human(ns / 1e6), human(ns / 1e9))
}

fn echo_hardware(r: &mut MachineReport, prefix: &str, hw: &HardwareProfile) {
    r.float(format!("{prefix}.bus_rate_bpns"), hw.bus_rate());
    r.float(format!("{prefix}.hit_ratio"), hw.hit_ratio());
    r.float(format!("{prefix}.cache_time_ns"), hw.cache_time());
    r.float(format!("{prefix}.memory_time_ns"), hw.memory_time());
}

fn echo_distribution(r: &mut MachineReport, prefix: &str, d: &RateDistribution) {
    match *d {
        RateDistribution::Fixed(rate) => {
            r.str(format!("{prefix}.distribution"), "fixed");
            r.float(format!("{prefix}.data_rate_bpns"), rate);
        }
        RateDistribution::Uniform { lo, hi } => {
            r.str(format!("{prefix}.distribution"), "uniform");
            r.float(format!("{prefix}.lo_bpns"), lo);
            r.float(format!("{prefix}.hi_bpns"), hi);
        }
        RateDistribution::Normal { mean, stddev } => {
            r.str(format!("{prefix}.distribution"), "normal");
            r.float(format!("{prefix}.mean_bpns"), mean);
            r.float(format!("{prefix}.stddev_bpns"), stddev);
        }
    }
}

/// Input echo under `input.`; `document_override` is the override the file
/// declared, whether or not it was applied.
fn echo_input(r: &mut MachineReport, label: &str, scenario: &Scenario, document_override: Option<f64>) {
    let d = &scenario.doocl;
    r.str("input.label", label);
    r.str("input.environment", scenario.environment.kind());
    r.str("input.doocl.organization", d.organization().as_str());
    r.int("input.doocl.component_count", d.component_count());
    r.float("input.doocl.iteration_time_ns", d.iteration_time());
    r.int("input.doocl.sublibrary_count", d.sublibrary_count());
    r.bool("input.doocl.available", d.available());
    r.str("input.command.text", scenario.command.text());
    r.int("input.command.bits", scenario.command.bits());
    r.str("input.component.name", scenario.component.name());
    r.int("input.component.bits", scenario.component.bits());
    match &scenario.environment {
        Environment::Local { client } => echo_hardware(r, "input.client", client),
        Environment::Remote { client, server, network } => {
            echo_hardware(r, "input.client", client);
            echo_hardware(r, "input.server", server);
            echo_distribution(r, "input.network", &network.data_rate());
        }
    }
    if let Some(ts) = document_override {
        r.float("input.explicit_ts_override_ns", ts);
        r.bool("input.ts_override_applied", scenario.explicit_ts_override.is_some());
    }
}

fn echo_result(r: &mut MachineReport, prefix: &str, result: &DcaqResult) {
    r.float(format!("{prefix}.dcaq"), result.dcaq);
    r.float(format!("{prefix}.access_time_seconds"), result.access_time_seconds);
    r.float(format!("{prefix}.access_time_ns"), result.access_time_ns());
    for stage in result.access_time_breakdown.stages() {
        r.float(format!("{prefix}.stage.{}_ns", stage.label), stage.duration_ns);
    }
    r.float(format!("{prefix}.ts_nanoseconds"), result.ts_nanoseconds);
    r.str(format!("{prefix}.ts_source"), result.ts_source.as_str());
    r.int(format!("{prefix}.search.iterations"), result.search.iterations);
    r.float(format!("{prefix}.search.iteration_time_ns"), result.search.iteration_time_ns);
    r.float(format!("{prefix}.search.ts_ns"), result.search.ts_ns);
    r.int(format!("{prefix}.availability"), u64::from(result.availability));
    r.int(format!("{prefix}.sublibrary_count"), result.sublibrary_count);
    if let Some(rate) = result.network_rate {
        r.float(format!("{prefix}.network_rate_bpns"), rate);
    }
    r.str(format!("{prefix}.organizedness"), result.classification.organizedness.as_str());
    r.str(format!("{prefix}.responsiveness"), result.classification.responsiveness.as_str());
}

/// One evaluated scenario, as passed to the renderers.
#[derive(Debug, Clone)]
pub struct Evaluated<'a> {
    pub loaded: &'a LoadedScenario,
    /// The scenario actually evaluated (override possibly stripped).
    pub scenario: &'a Scenario,
    pub result: DcaqResult,
}

impl Evaluated<'_> {
    fn document_override(&self) -> Option<f64> {
        self.loaded.document.explicit_ts_override
    }

    /// Override declared in the file but not applied, and differing from the
    /// computed search time.
    fn ignored_override(&self) -> Option<f64> {
        match (self.document_override(), self.scenario.explicit_ts_override) {
            (Some(ts), None) if ts != self.result.search.ts_ns => Some(ts),
            _ => None,
        }
    }
}

pub fn compute_machine(e: &Evaluated<'_>) -> MachineReport {
    let mut r = MachineReport::new("compute");
    echo_input(&mut r, &e.loaded.label, e.scenario, e.document_override());
    echo_result(&mut r, "result", &e.result);
    r.bool("result.ts_differs_from_override", e.result.ts_override_differs() || e.ignored_override().is_some());
    r
}

fn search_description(e: &Evaluated<'_>) -> String {
    use crate::model::Organization::*;
    let d = &e.scenario.doocl;
    let algorithm = match d.organization() {
        SortedSequentialList => "binary search over a sorted list",
        BalancedBinaryTree => "descent of a balanced binary tree",
        UnsortedSequentialList => "linear scan of an unsorted list",
    };
    format!(
        "{algorithm} of {} components: {} steps × {} ns = {} ns",
        d.component_count(),
        e.result.search.iterations,
        human(e.result.search.iteration_time_ns),
        human(e.result.search.ts_ns)
    )
}

pub fn compute_human(e: &Evaluated<'_>) -> String {
    let mut out = String::new();
    let s = e.scenario;
    let r = &e.result;
    let d = &s.doocl;
    let _ = writeln!(out, "Scenario: {} ({} environment)", e.loaded.label, s.environment.kind());
    let _ = writeln!(
        out,
        "Library:  {}, {} components, {} sublibraries, component {}",
        d.organization(),
        d.component_count(),
        d.sublibrary_count(),
        if d.available() { "available" } else { "NOT available" }
    );
    let _ = writeln!(
        out,
        "Request:  command {:?} ({} bits), component {} ({} bits)",
        s.command.text(),
        s.command.bits(),
        s.component.name(),
        s.component.bits()
    );
    if let Some(rate) = r.network_rate {
        let _ = writeln!(out, "Network:  {} bits/ns", human(rate));
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "Access time");
    let _ = writeln!(
        out,
        "  {:<5} {:<42} {:>10} {:>12} {:>16}",
        "stage", "description", "bits", "rate (bpns)", "duration (ns)"
    );
    for stage in r.access_time_breakdown.stages() {
        let (bits, rate, detail) = match stage.inputs {
            StageInputs::Transfer { bits, rate } => (bits.to_string(), human(rate), None),
            StageInputs::Memory { hit_ratio, cache_time, memory_time } => (
                "-".to_string(),
                "-".to_string(),
                Some(format!(
                    "hit ratio {}, cache {} ns, main memory {} ns",
                    human(hit_ratio),
                    human(cache_time),
                    human(memory_time)
                )),
            ),
        };
        let _ = writeln!(
            out,
            "  {:<5} {:<42} {:>10} {:>12} {:>16}",
            stage.label.to_string(),
            stage.kind.description(),
            bits,
            rate,
            human(stage.duration_ns)
        );
        if let Some(detail) = detail {
            let _ = writeln!(out, "        {detail}");
        }
    }
    let _ = writeln!(out, "  T = {}", duration_units(r.access_time_ns()));
    let _ = writeln!(out);
    let _ = writeln!(out, "Search time");
    let _ = writeln!(out, "  {}", search_description(e));
    match r.ts_source {
        TsSource::Computed => {
            let _ = writeln!(out, "  T_s = {} ns", human(r.ts_nanoseconds));
        }
        TsSource::Override => {
            let _ = writeln!(out, "  T_s = {} ns (scenario override)", human(r.ts_nanoseconds));
        }
    }
    if r.ts_override_differs() {
        let _ = writeln!(
            out,
            "  note: the override {} ns differs from the computed {} ns; rerun with --no-ts-override to use the computed value",
            human(r.ts_nanoseconds),
            human(r.search.ts_ns)
        );
    }
    if let Some(ts) = e.ignored_override() {
        let _ = writeln!(
            out,
            "  note: ignoring the scenario's T_s override of {} ns; the computed value {} ns is used, so the quotient deviates from the reference value",
            human(ts),
            human(r.search.ts_ns)
        );
    }
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "DCAQ = ({} × {}) / ({} s × {}) = {}",
        r.availability,
        human(r.ts_nanoseconds),
        human(r.access_time_seconds),
        r.sublibrary_count,
        human(r.dcaq)
    );
    let _ = writeln!(out, "Indication: {}", r.classification);
    out
}

pub fn compare_machine(ranked: &[Evaluated<'_>]) -> MachineReport {
    let mut r = MachineReport::new("compare");
    r.int("count", ranked.len() as u64);
    for (i, e) in ranked.iter().enumerate() {
        let prefix = format!("rank.{}", i + 1);
        r.str(format!("{prefix}.label"), e.loaded.label.as_str());
        echo_result(&mut r, &prefix, &e.result);
    }
    r
}

pub fn compare_human(ranked: &[Evaluated<'_>]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>4}  {:<20} {:>14} {:>14} {:>10} {:>6}  indication",
        "rank", "label", "DCAQ", "T (s)", "T_s (ns)", "n_s"
    );
    for (i, e) in ranked.iter().enumerate() {
        let r = &e.result;
        let _ = writeln!(
            out,
            "{:>4}  {:<20} {:>14} {:>14} {:>10} {:>6}  {}",
            i + 1,
            e.loaded.label,
            human(r.dcaq),
            human(r.access_time_seconds),
            human(r.ts_nanoseconds),
            r.sublibrary_count,
            r.classification
        );
    }
    if let Some(best) = ranked.first() {
        let _ = writeln!(out, "\nMost ready library: {}", best.loaded.label);
    }
    out
}

pub fn simulate_machine(loaded: &LoadedScenario, scenario: &Scenario, summary: &McSummary) -> MachineReport {
    let mut r = MachineReport::new("simulate");
    echo_input(&mut r, &loaded.label, scenario, loaded.document.explicit_ts_override);
    r.str("generator", summary.generator);
    r.int("seed", summary.seed);
    r.int("trials", summary.trials);
    r.float("dcaq.mean", summary.mean);
    r.float("dcaq.stddev", summary.stddev);
    r.float("dcaq.min", summary.min);
    r.float("dcaq.p5", summary.quantiles.p5);
    r.float("dcaq.p50", summary.quantiles.p50);
    r.float("dcaq.p95", summary.quantiles.p95);
    r.float("dcaq.max", summary.max);
    r.int("warning_count", summary.warnings.len() as u64);
    for (i, w) in summary.warnings.iter().enumerate() {
        r.str(format!("warning.{}", i + 1), w.message());
    }
    r
}

pub fn simulate_human(loaded: &LoadedScenario, summary: &McSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Scenario: {}", loaded.label);
    let _ = writeln!(
        out,
        "Monte Carlo over network rate: {} trials, {} seed {}",
        summary.trials, summary.generator, summary.seed
    );
    let _ = writeln!(out, "  mean   {}", human(summary.mean));
    let _ = writeln!(out, "  stddev {}", human(summary.stddev));
    let _ = writeln!(out, "  min    {}", human(summary.min));
    let _ = writeln!(out, "  p5     {}", human(summary.quantiles.p5));
    let _ = writeln!(out, "  p50    {}", human(summary.quantiles.p50));
    let _ = writeln!(out, "  p95    {}", human(summary.quantiles.p95));
    let _ = writeln!(out, "  max    {}", human(summary.max));
    out
}

pub fn validate_machine(report: &ValidationReport) -> MachineReport {
    let mut r = MachineReport::new("validate");
    r.int("options.max_n", report.options.max_n);
    r.float("options.tolerance", report.options.tolerance);
    r.int("options.replay_scenarios", report.options.replay_scenarios);
    r.int("options.seed", report.options.seed);
    for (i, s) in report.suites.iter().enumerate() {
        let p = format!("suite.{}", i + 1);
        r.str(format!("{p}.name"), s.name);
        r.int(format!("{p}.checks"), s.checks);
        r.int(format!("{p}.failures"), s.failures);
        r.bool(format!("{p}.passed"), s.passed());
        if let Some(e) = s.max_rel_error {
            r.float(format!("{p}.max_rel_error"), e);
        }
        if let Some(f) = &s.first_failure {
            r.str(format!("{p}.first_failure"), f.as_str());
        }
    }
    r.bool("passed", report.passed());
    r
}

pub fn validate_human(report: &ValidationReport) -> String {
    let mut out = String::new();
    for s in &report.suites {
        let verdict = if s.passed() { "PASS" } else { "FAIL" };
        let _ = write!(out, "{verdict}  {:<45} {} checks", s.name, s.checks);
        if let Some(e) = s.max_rel_error {
            let _ = write!(out, ", max relative error {e:.3e}");
        }
        let _ = writeln!(out);
        if let Some(f) = &s.first_failure {
            let _ = writeln!(out, "      first failure: {f}");
        }
    }
    let _ = writeln!(out, "{}", if report.passed() { "all suites passed" } else { "oracle disagreement" });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(format_float(2883.5756337858943), "2.8835756337858943e3");
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        for x in [0.1, 1.0 / 3.0, 147217.2, 1e-300, 6.02e23] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn human_numbers() {
        assert_eq!(human(83230.0), "83230");
        assert_eq!(human(17.200000000000003), "17.2");
        assert_eq!(human(8.323e-5), "8.323e-5");
        assert_eq!(human(0.0), "0");
        assert_eq!(human(2883.5756337858943), "2883.575634");
        assert_eq!(duration_units(83230.0), "83230 ns = 83.23 µs = 0.08323 ms = 8.323e-5 s");
    }

    #[test]
    fn machine_report_is_toml() {
        let mut r = MachineReport::new("compute");
        r.str("input.label", "a \"quoted\" label").float("result.dcaq", 0.1).int("n", 3).bool("ok", true);
        let parsed: toml::Table = r.to_string().parse().unwrap();
        assert_eq!(parsed["schema"].as_str(), Some(SCHEMA));
        assert_eq!(parsed["result"]["dcaq"].as_float(), Some(0.1));
        assert_eq!(parsed["input"]["label"].as_str(), Some("a \"quoted\" label"));
    }
}
