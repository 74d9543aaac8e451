//! C interface to `monoflow`.
//!
//! Every function returns an [`MfStatus`]; on failure a description is
//! available from [`mf_last_error`] on the calling thread. Scenarios are
//! opaque handles created by [`mf_scenario_from_json`] and released with
//! [`mf_scenario_free`]. Strings returned by the library are released with
//! [`mf_string_free`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use monoflow::cli::{self, CliError, Command};
use monoflow::config::ScenarioConfig;
use monoflow::force::{self, FlowScenario, ForceMethod, MomentMethod};
use monoflow::theorems::cauchy_kernel;
use monoflow::{Error, Quaternion, ReducedPoint};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ConfigError = 3,
    ComputeError = 4,
    /// The method's hypotheses do not hold for this scenario.
    HypothesisViolated = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MfForceMethod {
    PressureDirect = 0,
    BlasiusSpeed = 1,
    ComponentSc = 2,
    MonogenicForm = 3,
}

fn force_method(code: c_int) -> Option<ForceMethod> {
    Some(match code {
        c if c == MfForceMethod::PressureDirect as c_int => ForceMethod::PressureDirect,
        c if c == MfForceMethod::BlasiusSpeed as c_int => ForceMethod::BlasiusSpeed,
        c if c == MfForceMethod::ComponentSc as c_int => ForceMethod::ComponentSc,
        c if c == MfForceMethod::MonogenicForm as c_int => ForceMethod::MonogenicForm,
        _ => return None,
    })
}

/// A flow scenario built from a JSON configuration.
pub struct MfScenario {
    scenario: FlowScenario,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: MfStatus, msg: &str) -> MfStatus {
    set_error(msg);
    status
}

fn compute_error(e: Error) -> MfStatus {
    let status = match e {
        Error::HypothesisViolated(_) => MfStatus::HypothesisViolated,
        _ => MfStatus::ComputeError,
    };
    fail(status, &e.to_string())
}

fn guard(f: impl FnOnce() -> MfStatus) -> MfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == MfStatus::Ok {
                set_error("");
            }
            s
        }
        Err(_) => fail(MfStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, MfStatus> {
    if s.is_null() {
        return Err(fail(MfStatus::NullPointer, &format!("{what} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(MfStatus::InvalidUtf8, &format!("{what} is not valid UTF-8")))
}

unsafe fn read_point(p: *const f64) -> ReducedPoint {
    ReducedPoint::new(*p, *p.add(1), *p.add(2))
}

unsafe fn write_point(out: *mut f64, v: ReducedPoint) {
    for (k, x) in v.to_array().into_iter().enumerate() {
        *out.add(k) = x;
    }
}

unsafe fn write_quaternion(out: *mut f64, q: Quaternion) {
    for (k, x) in q.to_array().into_iter().enumerate() {
        *out.add(k) = x;
    }
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn mf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a scenario from a JSON configuration.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mf_scenario_from_json(json: *const c_char, out: *mut *mut MfScenario) -> MfStatus {
    guard(|| {
        if out.is_null() {
            return fail(MfStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let text = match read_str(json, "json") {
            Ok(t) => t,
            Err(s) => return s,
        };
        let scenario = match ScenarioConfig::from_json(text).and_then(|c| c.build_scenario()) {
            Ok(s) => s,
            Err(e) => return fail(MfStatus::ConfigError, &e.to_string()),
        };
        *out = Box::into_raw(Box::new(MfScenario { scenario }));
        MfStatus::Ok
    })
}

/// Releases a scenario; null is ignored.
///
/// # Safety
/// `sc` must come from [`mf_scenario_from_json`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mf_scenario_free(sc: *mut MfScenario) {
    if !sc.is_null() {
        drop(Box::from_raw(sc));
    }
}

/// Force on the body by `method` (an `MfForceMethod` value), written to `out[0..3]`.
///
/// # Safety
/// `sc` must be a live scenario and `out` must hold three doubles.
#[no_mangle]
pub unsafe extern "C" fn mf_scenario_force(sc: *const MfScenario, method: c_int, out: *mut f64) -> MfStatus {
    guard(|| {
        if sc.is_null() || out.is_null() {
            return fail(MfStatus::NullPointer, "scenario or out is null");
        }
        let Some(method) = force_method(method) else {
            return fail(MfStatus::ConfigError, &format!("unknown force method {method}"));
        };
        match force::force(&(*sc).scenario, method) {
            Ok(f) => {
                write_point(out, f.value);
                MfStatus::Ok
            }
            Err(e) => compute_error(e),
        }
    })
}

/// Moment about `reference[0..3]` by the speed formula, written to `out[0..3]`.
///
/// # Safety
/// `sc` must be a live scenario; `reference` and `out` must hold three doubles.
#[no_mangle]
pub unsafe extern "C" fn mf_scenario_moment(sc: *const MfScenario, reference: *const f64, out: *mut f64) -> MfStatus {
    guard(|| {
        if sc.is_null() || reference.is_null() || out.is_null() {
            return fail(MfStatus::NullPointer, "scenario, reference or out is null");
        }
        match force::moment(&(*sc).scenario, read_point(reference), MomentMethod::BlasiusSpeed) {
            Ok(m) => {
                write_point(out, m.value);
                MfStatus::Ok
            }
            Err(e) => compute_error(e),
        }
    })
}

/// Hamilton product `a b` of quaternions stored as `(q0, q1, q2, q3)`.
///
/// # Safety
/// `a`, `b` and `out` must each hold four doubles.
#[no_mangle]
pub unsafe extern "C" fn mf_quaternion_mul(a: *const f64, b: *const f64, out: *mut f64) -> MfStatus {
    guard(|| {
        if a.is_null() || b.is_null() || out.is_null() {
            return fail(MfStatus::NullPointer, "a, b or out is null");
        }
        let read = |p: *const f64| Quaternion::new(*p, *p.add(1), *p.add(2), *p.add(3));
        write_quaternion(out, read(a) * read(b));
        MfStatus::Ok
    })
}

/// Cauchy kernel `x̄ / (4π|x|³)` at the point `x[0..3]`, written to `out[0..4]`.
///
/// # Safety
/// `x` must hold three doubles and `out` four.
#[no_mangle]
pub unsafe extern "C" fn mf_cauchy_kernel(x: *const f64, out: *mut f64) -> MfStatus {
    guard(|| {
        if x.is_null() || out.is_null() {
            return fail(MfStatus::NullPointer, "x or out is null");
        }
        match cauchy_kernel(read_point(x)) {
            Ok(q) => {
                write_quaternion(out, q);
                MfStatus::Ok
            }
            Err(e) => compute_error(e),
        }
    })
}

/// Runs a command-line subcommand (`verify`, `force`, `moment`,
/// `convergence`, `reduce2d`) on a JSON configuration. The report is stored
/// in `*report` (free with [`mf_string_free`]) and `*passed` is set to 1 when
/// every check passed, 0 otherwise.
///
/// # Safety
/// `command` and `config_json` must be NUL-terminated strings; `report` and
/// `passed` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn mf_run_json(
    command: *const c_char,
    config_json: *const c_char,
    report: *mut *mut c_char,
    passed: *mut c_int,
) -> MfStatus {
    guard(|| {
        if report.is_null() || passed.is_null() {
            return fail(MfStatus::NullPointer, "report or passed is null");
        }
        *report = ptr::null_mut();
        *passed = 0;
        let (name, text) = match (read_str(command, "command"), read_str(config_json, "config_json")) {
            (Ok(n), Ok(t)) => (n, t),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let command = match name {
            "verify" => Command::Verify,
            "force" => Command::Force,
            "moment" => Command::Moment,
            "convergence" => Command::Convergence,
            "reduce2d" => Command::Reduce2d,
            other => return fail(MfStatus::ConfigError, &format!("unknown command {other:?}")),
        };
        let cfg = match ScenarioConfig::from_json(text) {
            Ok(c) => c,
            Err(e) => return fail(MfStatus::ConfigError, &e.to_string()),
        };
        match cli::run_config(command, &cfg) {
            Ok(out) => match CString::new(out.text) {
                Ok(c) => {
                    *report = c.into_raw();
                    *passed = c_int::from(out.passed);
                    MfStatus::Ok
                }
                Err(_) => fail(MfStatus::ComputeError, "report contains a NUL byte"),
            },
            Err(e) => {
                let status = match e {
                    CliError::Usage(_) | CliError::Config(_) => MfStatus::ConfigError,
                    CliError::Compute(_) | CliError::Io(_) => MfStatus::ComputeError,
                };
                fail(status, &e.to_string())
            }
        }
    })
}

/// Releases a string returned by the library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
