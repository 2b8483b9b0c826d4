//! The `dcaq` command-line surface.
//!
//! [`run`] takes the argument list and the two output streams and returns the
//! process exit code, so the binary is a thin wrapper and tests can drive the
//! whole surface in-process.

use std::io::Write;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::document::{load, DocumentError, LoadedScenario};
use crate::metric::{evaluate, rank, ClassificationThresholds};
use crate::model::Scenario;
use crate::report::{self, Evaluated};
use crate::simulator::monte_carlo_dcaq;
use crate::validation::{run_validation, InjectedFault, ValidateOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_ORACLE: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Human,
    Machine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FaultArg {
    SearchCount,
    ReplayBias,
}

#[derive(Debug, Parser)]
#[command(name = "dcaq", version, about = "Readiness quotient for distributed component libraries")]
struct Cli {
    /// Report style.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Human)]
    output: OutputFormat,

    /// Ignore any explicit_ts_override in the scenario and use the computed search time.
    #[arg(long, global = true)]
    no_ts_override: bool,

    #[command(flatten)]
    thresholds: ThresholdArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ThresholdArgs {
    /// Smallest quotient labelled good organizedness, high responsiveness.
    #[arg(long, global = true, default_value_t = 1000.0)]
    high_min: f64,

    /// Smallest quotient labelled average organizedness.
    #[arg(long, global = true, default_value_t = 100.0)]
    average_min: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one scenario and print the breakdown.
    Compute {
        /// Scenario file, or a built-in fixture name.
        file: String,
    },
    /// Rank two or more scenarios by quotient.
    Compare {
        #[arg(required = true, num_args = 1..)]
        files: Vec<String>,
    },
    /// Monte Carlo over the network-rate distribution.
    Simulate {
        file: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Check the analytic model against the simulator.
    Validate {
        #[arg(long, default_value_t = 1024)]
        max_n: u64,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        /// Randomized scenarios for the replay suite.
        #[arg(long, default_value_t = 10_000)]
        replay_scenarios: u64,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
}

/// Failure that ends a command, with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Self { code: EXIT_INVALID, message: message.into() }
    }
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        Failure::invalid(e.to_string())
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::invalid(e.to_string())
    }
}

struct Output {
    stdout: String,
    stderr: String,
    code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self { stdout, stderr: String::new(), code: EXIT_OK }
    }
}

/// Runs the CLI. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(o) => {
            let _ = out.write_all(o.stdout.as_bytes());
            let _ = err.write_all(o.stderr.as_bytes());
            o.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn thresholds(cli: &Cli) -> Result<ClassificationThresholds, Failure> {
    ClassificationThresholds::new(cli.thresholds.high_min, cli.thresholds.average_min)
        .map_err(|e| Failure::usage(e.to_string()))
}

fn prepared(cli: &Cli, loaded: &LoadedScenario) -> Scenario {
    if cli.no_ts_override {
        loaded.scenario.clone().without_ts_override()
    } else {
        loaded.scenario.clone()
    }
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Compute { file } => compute(cli, file),
        Command::Compare { files } => compare(cli, files),
        Command::Simulate { file, trials, seed } => simulate(cli, file, *trials, *seed),
        Command::Validate { max_n, tolerance, replay_scenarios, seed, inject_fault } => {
            let options = ValidateOptions {
                max_n: *max_n,
                tolerance: *tolerance,
                replay_scenarios: *replay_scenarios,
                seed: *seed,
                fault: inject_fault.map(|f| match f {
                    FaultArg::SearchCount => InjectedFault::SearchCountOffByOne,
                    FaultArg::ReplayBias => InjectedFault::ReplayBias,
                }),
            };
            validate(cli, &options)
        }
    }
}

fn compute(cli: &Cli, file: &str) -> Result<Output, Failure> {
    let thresholds = thresholds(cli)?;
    let loaded = load(file)?;
    let scenario = prepared(cli, &loaded);
    let result = evaluate(&scenario, &thresholds, None)?;
    let e = Evaluated { loaded: &loaded, scenario: &scenario, result };
    Ok(Output::ok(match cli.output {
        OutputFormat::Human => report::compute_human(&e),
        OutputFormat::Machine => report::compute_machine(&e).to_string(),
    }))
}

/// Label that remembers its input position.
struct Indexed(usize, String);

impl AsRef<str> for Indexed {
    fn as_ref(&self) -> &str {
        &self.1
    }
}

fn compare(cli: &Cli, files: &[String]) -> Result<Output, Failure> {
    if files.len() < 2 {
        return Err(Failure::usage("compare needs at least two scenarios"));
    }
    let thresholds = thresholds(cli)?;
    let loaded = files.iter().map(|f| load(f)).collect::<Result<Vec<_>, _>>()?;
    let scenarios: Vec<Scenario> = loaded.iter().map(|l| prepared(cli, l)).collect();
    let mut results = Vec::with_capacity(loaded.len());
    for (i, (l, s)) in loaded.iter().zip(&scenarios).enumerate() {
        results.push((Indexed(i, l.label.clone()), evaluate(s, &thresholds, None)?));
    }
    let ranked: Vec<Evaluated<'_>> = rank(results)?
        .into_iter()
        .map(|(Indexed(i, _), result)| Evaluated { loaded: &loaded[i], scenario: &scenarios[i], result })
        .collect();
    Ok(Output::ok(match cli.output {
        OutputFormat::Human => report::compare_human(&ranked),
        OutputFormat::Machine => report::compare_machine(&ranked).to_string(),
    }))
}

fn simulate(cli: &Cli, file: &str, trials: u64, seed: u64) -> Result<Output, Failure> {
    if trials == 0 {
        return Err(Failure::usage("--trials must be at least 1"));
    }
    let loaded = load(file)?;
    let scenario = prepared(cli, &loaded);
    let summary = monte_carlo_dcaq(&scenario, trials, seed)?;
    let stdout = match cli.output {
        OutputFormat::Human => report::simulate_human(&loaded, &summary),
        OutputFormat::Machine => report::simulate_machine(&loaded, &scenario, &summary).to_string(),
    };
    let stderr = summary.warnings.iter().map(|w| format!("warning: {}\n", w.message())).collect();
    Ok(Output { stdout, stderr, code: EXIT_OK })
}

fn validate(cli: &Cli, options: &ValidateOptions) -> Result<Output, Failure> {
    if options.max_n == 0 {
        return Err(Failure::usage("--max-n must be at least 1"));
    }
    if !(options.tolerance.is_finite() && options.tolerance >= 0.0) {
        return Err(Failure::usage("--tolerance must be a finite non-negative number"));
    }
    let report = run_validation(options)?;
    let stdout = match cli.output {
        OutputFormat::Human => report::validate_human(&report),
        OutputFormat::Machine => report::validate_machine(&report).to_string(),
    };
    let (stderr, code) = if report.passed() {
        (String::new(), EXIT_OK)
    } else {
        ("error: oracle disagreement\n".to_string(), EXIT_ORACLE)
    };
    Ok(Output { stdout, stderr, code })
}
