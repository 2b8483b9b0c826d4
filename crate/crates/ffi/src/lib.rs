//! C ABI for the `dcaq` library.
//!
//! Every fallible entry point returns a [`DcaqStatus`] and writes its result
//! through an out-pointer. On failure, [`dcaq_last_error_message`] describes
//! the most recent error on the calling thread. Scenarios and evaluations are
//! opaque handles released with their `_free` functions; strings returned by
//! the library are released with [`dcaq_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dcaq::document::{load, DocumentError, LoadedScenario, ScenarioDocument};
use dcaq::metric::{OrganizednessLabel, ResponsivenessLabel};
use dcaq::model::{Organization, Scenario};
use dcaq::report::{self, Evaluated};
use dcaq::simulator::{monte_carlo_dcaq, McWarning};
use dcaq::{evaluate, ClassificationThresholds, Error};

/// Outcome of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DcaqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    InvalidInput = 5,
    Overflow = 6,
    OutOfRange = 7,
    SamplerExhausted = 8,
    Internal = 98,
    Panic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DcaqOrganization {
    SortedSequentialList = 0,
    BalancedBinaryTree = 1,
    UnsortedSequentialList = 2,
}

impl DcaqOrganization {
    fn decode(raw: u32) -> Option<Organization> {
        match raw {
            0 => Some(Organization::SortedSequentialList),
            1 => Some(Organization::BalancedBinaryTree),
            2 => Some(Organization::UnsortedSequentialList),
            _ => None,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DcaqOrganizedness {
    Poor = 0,
    Average = 1,
    Good = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DcaqResponsiveness {
    Low = 0,
    High = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DcaqClassification {
    pub organizedness: DcaqOrganizedness,
    pub responsiveness: DcaqResponsiveness,
}

/// Monte Carlo summary of the quotient.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DcaqMcSummary {
    pub trials: u64,
    pub seed: u64,
    pub mean: f64,
    pub stddev: f64,
    pub min: f64,
    pub p5: f64,
    pub p50: f64,
    pub p95: f64,
    pub max: f64,
    /// Set when every trial used the same network rate.
    pub degenerate: bool,
}

/// Parsed, validated scenario.
pub struct DcaqScenario {
    loaded: LoadedScenario,
}

/// Result of evaluating a scenario.
pub struct DcaqEvaluation {
    loaded: LoadedScenario,
    scenario: Scenario,
    result: dcaq::DcaqResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(DcaqStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Overflow { .. } => DcaqStatus::Overflow,
            Error::SamplerExhausted { .. } => DcaqStatus::SamplerExhausted,
            _ => DcaqStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        let status = match e {
            DocumentError::Io { .. } => DcaqStatus::Io,
            DocumentError::Parse { .. } => DcaqStatus::Parse,
            DocumentError::Invalid { .. } | DocumentError::Inconsistent { .. } => DcaqStatus::InvalidInput,
            DocumentError::Render(_) => DcaqStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', "\\0")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

/// Runs `f`, recording any failure or panic for [`dcaq_last_error_message`].
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DcaqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            DcaqStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            DcaqStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(DcaqStatus::NullPointer, format!("{what} is null"))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn in_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn in_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure(DcaqStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Library version, a static string that must not be freed.
#[no_mangle]
pub extern "C" fn dcaq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL. The caller owns
/// the returned string and frees it with [`dcaq_string_free`].
#[no_mangle]
pub extern "C" fn dcaq_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn dcaq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads a scenario from a file path, or from a built-in fixture name
/// (`illustration1`, `illustration2`) when no such file exists.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dcaq_scenario_from_file(path: *const c_char, out: *mut *mut DcaqScenario) -> DcaqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let loaded = load(in_str(path, "path")?)?;
        *out = Box::into_raw(Box::new(DcaqScenario { loaded }));
        Ok(())
    })
}

/// Parses a scenario document held in memory.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dcaq_scenario_from_str(text: *const c_char, out: *mut *mut DcaqScenario) -> DcaqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let document = ScenarioDocument::from_toml_str(in_str(text, "text")?)?;
        let scenario = document.to_scenario()?;
        let label = document.label.clone().unwrap_or_else(|| "scenario".to_string());
        *out = Box::into_raw(Box::new(DcaqScenario { loaded: LoadedScenario { label, document, scenario } }));
        Ok(())
    })
}

/// # Safety
/// `scenario` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn dcaq_scenario_free(scenario: *mut DcaqScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Scenario label; free with [`dcaq_string_free`].
///
/// # Safety
/// `scenario` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dcaq_scenario_label(scenario: *const DcaqScenario) -> *mut c_char {
    scenario.as_ref().map_or(ptr::null_mut(), |s| into_c_string(s.loaded.label.clone()))
}

fn prepared(loaded: &LoadedScenario, use_override: bool) -> Scenario {
    if use_override {
        loaded.scenario.clone()
    } else {
        loaded.scenario.clone().without_ts_override()
    }
}

/// Evaluates a scenario with the default thresholds. When `use_override` is
/// false any explicit search-time override is ignored.
///
/// # Safety
/// `scenario` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dcaq_evaluate(
    scenario: *const DcaqScenario,
    use_override: bool,
    out: *mut *mut DcaqEvaluation,
) -> DcaqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let loaded = &in_ref(scenario, "scenario")?.loaded;
        let scenario = prepared(loaded, use_override);
        let result = evaluate(&scenario, &ClassificationThresholds::default(), None)?;
        *out = Box::into_raw(Box::new(DcaqEvaluation { loaded: loaded.clone(), scenario, result }));
        Ok(())
    })
}

/// # Safety
/// `evaluation` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn dcaq_evaluation_free(evaluation: *mut DcaqEvaluation) {
    if !evaluation.is_null() {
        drop(Box::from_raw(evaluation));
    }
}

/// The quotient, or NaN for a NULL handle.
///
/// # Safety
/// `evaluation` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dcaq_evaluation_value(evaluation: *const DcaqEvaluation) -> f64 {
    evaluation.as_ref().map_or(f64::NAN, |e| e.result.dcaq)
}

/// Total access time in ns, or NaN for a NULL handle.
///
/// # Safety
/// `evaluation` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dcaq_evaluation_access_time_ns(evaluation: *const DcaqEvaluation) -> f64 {
    evaluation.as_ref().map_or(f64::NAN, |e| e.result.access_time_ns())
}

/// Search time in ns actually used, or NaN for a NULL handle.
///
/// # Safety
/// `evaluation` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dcaq_evaluation_ts_ns(evaluation: *const DcaqEvaluation) -> f64 {
    evaluation.as_ref().map_or(f64::NAN, |e| e.result.ts_nanoseconds)
}

/// 3 for local scenarios, 6 for remote, 0 for a NULL handle.
///
/// # Safety
/// `evaluation` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dcaq_evaluation_stage_count(evaluation: *const DcaqEvaluation) -> usize {
    evaluation.as_ref().map_or(0, |e| e.result.access_time_breakdown.stages().len())
}

/// Duration in ns of stage `index` (0-based).
///
/// # Safety
/// `evaluation` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dcaq_evaluation_stage_ns(
    evaluation: *const DcaqEvaluation,
    index: usize,
    out: *mut f64,
) -> DcaqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let stages = in_ref(evaluation, "evaluation")?.result.access_time_breakdown.stages();
        let stage = stages
            .get(index)
            .ok_or_else(|| Failure(DcaqStatus::OutOfRange, format!("stage {index} of {}", stages.len())))?;
        *out = stage.duration_ns;
        Ok(())
    })
}

/// # Safety
/// `evaluation` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dcaq_evaluation_classification(
    evaluation: *const DcaqEvaluation,
    out: *mut DcaqClassification,
) -> DcaqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let c = in_ref(evaluation, "evaluation")?.result.classification;
        *out = DcaqClassification {
            organizedness: match c.organizedness {
                OrganizednessLabel::Poor => DcaqOrganizedness::Poor,
                OrganizednessLabel::Average => DcaqOrganizedness::Average,
                OrganizednessLabel::Good => DcaqOrganizedness::Good,
            },
            responsiveness: match c.responsiveness {
                ResponsivenessLabel::Low => DcaqResponsiveness::Low,
                ResponsivenessLabel::High => DcaqResponsiveness::High,
            },
        };
        Ok(())
    })
}

/// Rendered report, machine-readable when `machine` is true. Free with
/// [`dcaq_string_free`]; NULL for a NULL handle.
///
/// # Safety
/// `evaluation` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dcaq_evaluation_report(evaluation: *const DcaqEvaluation, machine: bool) -> *mut c_char {
    let Some(e) = evaluation.as_ref() else {
        return ptr::null_mut();
    };
    let view = Evaluated { loaded: &e.loaded, scenario: &e.scenario, result: e.result.clone() };
    into_c_string(if machine { report::compute_machine(&view).to_string() } else { report::compute_human(&view) })
}

/// Quotient from its four terms: availability, search time (ns), access time
/// (s) and sublibrary count.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dcaq_compute(
    available: bool,
    ts_ns: f64,
    access_time_s: f64,
    sublibrary_count: u64,
    out: *mut f64,
) -> DcaqStatus {
    guard(|| {
        *out_ref(out, "out")? = dcaq::metric::dcaq(available, ts_ns, access_time_s, sublibrary_count)?;
        Ok(())
    })
}

/// `bits / rate` in ns, with `rate` in bits/ns.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dcaq_transfer_time(bits: u64, rate: f64, out: *mut f64) -> DcaqStatus {
    guard(|| {
        *out_ref(out, "out")? = dcaq::access_time::transfer_time(bits, rate)?;
        Ok(())
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dcaq_cache_effective_time(
    hit_ratio: f64,
    cache_time: f64,
    memory_time: f64,
    out: *mut f64,
) -> DcaqStatus {
    guard(|| {
        *out_ref(out, "out")? = dcaq::access_time::cache_effective_time(hit_ratio, cache_time, memory_time)?;
        Ok(())
    })
}

/// Worst-case search steps for `component_count` components.
/// `organization` is a [`DcaqOrganization`] value.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dcaq_search_iterations(organization: u32, component_count: u64, out: *mut u64) -> DcaqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let organization = DcaqOrganization::decode(organization)
            .ok_or_else(|| Failure(DcaqStatus::InvalidInput, format!("unknown organization {organization}")))?;
        *out = dcaq::organizedness::search_iterations(organization, component_count)?;
        Ok(())
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dcaq_sublibrary_count(machine_types: u64, os_types: u64, out: *mut u64) -> DcaqStatus {
    guard(|| {
        *out_ref(out, "out")? = dcaq::metric::sublibrary_count(machine_types, os_types)?;
        Ok(())
    })
}

/// Monte Carlo over the scenario's network-rate distribution.
///
/// # Safety
/// `scenario` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dcaq_monte_carlo(
    scenario: *const DcaqScenario,
    use_override: bool,
    trials: u64,
    seed: u64,
    out: *mut DcaqMcSummary,
) -> DcaqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let scenario = prepared(&in_ref(scenario, "scenario")?.loaded, use_override);
        let s = monte_carlo_dcaq(&scenario, trials, seed)?;
        *out = DcaqMcSummary {
            trials: s.trials,
            seed: s.seed,
            mean: s.mean,
            stddev: s.stddev,
            min: s.min,
            p5: s.quantiles.p5,
            p50: s.quantiles.p50,
            p95: s.quantiles.p95,
            max: s.max,
            degenerate: s.warnings.contains(&McWarning::DegenerateDistribution),
        };
        Ok(())
    })
}
