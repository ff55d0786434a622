//! C ABI for the proxident library. Callers work with opaque handles to
//! scenarios and solver traces; every function returns an error code and
//! writes results through out-pointers. See include/proxident.h.

use std::ffi::{c_char, c_double, c_int, CStr};

use proxident::experiments::{default_budget, scenario_by_name, Scenario};
use proxident::regularizers::ManifoldId;
use proxident::solvers::{run, Algorithm, SolverConfig, Trace};

pub const PROXIDENT_OK: c_int = 0;
pub const PROXIDENT_ERR_NULL_POINTER: c_int = 1;
pub const PROXIDENT_ERR_INVALID_ARGUMENT: c_int = 2;
pub const PROXIDENT_ERR_UNKNOWN_SCENARIO: c_int = 3;
pub const PROXIDENT_ERR_SOLVER: c_int = 4;
pub const PROXIDENT_ERR_OUT_OF_RANGE: c_int = 5;
pub const PROXIDENT_ERR_BUFFER_TOO_SMALL: c_int = 6;

pub const PROXIDENT_ALGO_PG: c_int = 0;
pub const PROXIDENT_ALGO_APG: c_int = 1;
pub const PROXIDENT_ALGO_MFISTA: c_int = 2;
pub const PROXIDENT_ALGO_T1: c_int = 3;
pub const PROXIDENT_ALGO_T2: c_int = 4;

/// Opaque problem-instance handle.
pub struct ProxidentScenario {
    inner: Scenario,
}

/// Opaque solver-trace handle.
pub struct ProxidentTrace {
    inner: Trace,
}

/// Per-iteration summary exposed across the ABI.
#[repr(C)]
pub struct ProxidentRecord {
    pub k: usize,
    pub prox_steps_cumulative: usize,
    pub f_value: c_double,
    pub accelerated: c_int,
    pub in_z: c_int,
    pub signature_len: usize,
}

fn algo_from_code(code: c_int) -> Option<Algorithm> {
    match code {
        PROXIDENT_ALGO_PG => Some(Algorithm::Pg),
        PROXIDENT_ALGO_APG => Some(Algorithm::Apg),
        PROXIDENT_ALGO_MFISTA => Some(Algorithm::Mfista),
        PROXIDENT_ALGO_T1 => Some(Algorithm::ProvisionalT1),
        PROXIDENT_ALGO_T2 => Some(Algorithm::ProvisionalT2),
        _ => None,
    }
}

/// Static description of an error code; never null.
#[no_mangle]
pub extern "C" fn proxident_error_message(code: c_int) -> *const c_char {
    let msg: &'static [u8] = match code {
        PROXIDENT_OK => b"ok\0",
        PROXIDENT_ERR_NULL_POINTER => b"null pointer argument\0",
        PROXIDENT_ERR_INVALID_ARGUMENT => b"invalid argument\0",
        PROXIDENT_ERR_UNKNOWN_SCENARIO => b"unknown scenario name\0",
        PROXIDENT_ERR_SOLVER => b"solver failure\0",
        PROXIDENT_ERR_OUT_OF_RANGE => b"index out of range\0",
        PROXIDENT_ERR_BUFFER_TOO_SMALL => b"buffer too small\0",
        _ => b"unrecognized error code\0",
    };
    msg.as_ptr() as *const c_char
}

/// Build a named benchmark scenario. `name` is a NUL-terminated UTF-8
/// string (e.g. "lasso", "nuclear", "group-pball"). On success writes a
/// handle that must be released with proxident_scenario_free.
///
/// # Safety
/// `name` must point to a valid NUL-terminated string and `out` to a
/// writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn proxident_scenario_create(
    name: *const c_char,
    seed: u64,
    out: *mut *mut ProxidentScenario,
) -> c_int {
    if name.is_null() || out.is_null() {
        return PROXIDENT_ERR_NULL_POINTER;
    }
    let name = match CStr::from_ptr(name).to_str() {
        Ok(s) => s,
        Err(_) => return PROXIDENT_ERR_INVALID_ARGUMENT,
    };
    match scenario_by_name(name, seed) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(ProxidentScenario { inner }));
            PROXIDENT_OK
        }
        Err(_) => PROXIDENT_ERR_UNKNOWN_SCENARIO,
    }
}

/// # Safety
/// `scenario` must be a handle from proxident_scenario_create, or null.
#[no_mangle]
pub unsafe extern "C" fn proxident_scenario_free(scenario: *mut ProxidentScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Problem dimension (number of optimization variables).
///
/// # Safety
/// Both pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn proxident_scenario_dim(
    scenario: *const ProxidentScenario,
    out: *mut usize,
) -> c_int {
    if scenario.is_null() || out.is_null() {
        return PROXIDENT_ERR_NULL_POINTER;
    }
    *out = (*scenario).inner.problem.dim();
    PROXIDENT_OK
}

/// Default prox-step budget for a named scenario; 0 for unknown names.
///
/// # Safety
/// `name` must point to a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn proxident_default_budget(name: *const c_char) -> usize {
    if name.is_null() {
        return 0;
    }
    match CStr::from_ptr(name).to_str() {
        Ok(s) => default_budget(s),
        Err(_) => 0,
    }
}

/// Run one algorithm on a scenario from its stored starting point.
/// `budget` is the proximal-step budget; pass 0 for the scenario default.
/// On success writes a trace handle that must be released with
/// proxident_trace_free.
///
/// # Safety
/// `scenario` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn proxident_run(
    scenario: *const ProxidentScenario,
    algo: c_int,
    budget: usize,
    out: *mut *mut ProxidentTrace,
) -> c_int {
    if scenario.is_null() || out.is_null() {
        return PROXIDENT_ERR_NULL_POINTER;
    }
    let algo = match algo_from_code(algo) {
        Some(a) => a,
        None => return PROXIDENT_ERR_INVALID_ARGUMENT,
    };
    let scen = &(*scenario).inner;
    let budget = if budget == 0 {
        default_budget(&scen.name)
    } else {
        budget
    };
    let cfg = SolverConfig {
        max_prox_steps: budget,
        ..Default::default()
    };
    match run(algo, &scen.problem, &cfg, &scen.x0) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(ProxidentTrace { inner }));
            PROXIDENT_OK
        }
        Err(_) => PROXIDENT_ERR_SOLVER,
    }
}

/// # Safety
/// `trace` must be a handle from proxident_run, or null.
#[no_mangle]
pub unsafe extern "C" fn proxident_trace_free(trace: *mut ProxidentTrace) {
    if !trace.is_null() {
        drop(Box::from_raw(trace));
    }
}

/// Number of recorded iterations.
///
/// # Safety
/// Both pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn proxident_trace_len(
    trace: *const ProxidentTrace,
    out: *mut usize,
) -> c_int {
    if trace.is_null() || out.is_null() {
        return PROXIDENT_ERR_NULL_POINTER;
    }
    *out = (*trace).inner.records.len();
    PROXIDENT_OK
}

/// Objective value at the final iterate.
///
/// # Safety
/// Both pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn proxident_trace_final_f(
    trace: *const ProxidentTrace,
    out: *mut c_double,
) -> c_int {
    if trace.is_null() || out.is_null() {
        return PROXIDENT_ERR_NULL_POINTER;
    }
    *out = (*trace).inner.final_f();
    PROXIDENT_OK
}

/// Total proximal steps consumed by the run.
///
/// # Safety
/// Both pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn proxident_trace_prox_steps(
    trace: *const ProxidentTrace,
    out: *mut usize,
) -> c_int {
    if trace.is_null() || out.is_null() {
        return PROXIDENT_ERR_NULL_POINTER;
    }
    *out = (*trace).inner.total_prox_steps();
    PROXIDENT_OK
}

/// Summary of record `index` (0-based).
///
/// # Safety
/// Both pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn proxident_trace_record(
    trace: *const ProxidentTrace,
    index: usize,
    out: *mut ProxidentRecord,
) -> c_int {
    if trace.is_null() || out.is_null() {
        return PROXIDENT_ERR_NULL_POINTER;
    }
    let records = &(*trace).inner.records;
    let Some(r) = records.get(index) else {
        return PROXIDENT_ERR_OUT_OF_RANGE;
    };
    *out = ProxidentRecord {
        k: r.k,
        prox_steps_cumulative: r.prox_steps_cumulative,
        f_value: r.f_value,
        accelerated: r.accelerated as c_int,
        in_z: r.in_z as c_int,
        signature_len: r.signature.len(),
    };
    PROXIDENT_OK
}

/// Number of active-structure manifolds certified at the final iterate.
///
/// # Safety
/// Both pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn proxident_trace_final_signature_len(
    trace: *const ProxidentTrace,
    out: *mut usize,
) -> c_int {
    if trace.is_null() || out.is_null() {
        return PROXIDENT_ERR_NULL_POINTER;
    }
    *out = (*trace).inner.final_signature.len();
    PROXIDENT_OK
}

/// Whether the final signature certifies a given zero coordinate.
/// Writes 1 or 0.
///
/// # Safety
/// Both pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn proxident_trace_coordinate_is_zero(
    trace: *const ProxidentTrace,
    coordinate: usize,
    out: *mut c_int,
) -> c_int {
    if trace.is_null() || out.is_null() {
        return PROXIDENT_ERR_NULL_POINTER;
    }
    let sig = &(*trace).inner.final_signature;
    *out = sig.contains(&ManifoldId::ZeroCoordinate(coordinate)) as c_int;
    PROXIDENT_OK
}

/// Copy the final iterate into `buf` (capacity `len` doubles). Writes the
/// required length to `written`; fails with BUFFER_TOO_SMALL if `len` is
/// insufficient, still reporting the required length.
///
/// # Safety
/// `buf` must point to at least `len` writable doubles; other pointers
/// must be valid.
#[no_mangle]
pub unsafe extern "C" fn proxident_trace_final_point(
    trace: *const ProxidentTrace,
    buf: *mut c_double,
    len: usize,
    written: *mut usize,
) -> c_int {
    if trace.is_null() || buf.is_null() || written.is_null() {
        return PROXIDENT_ERR_NULL_POINTER;
    }
    let point = (*trace).inner.final_point.as_slice();
    *written = point.len();
    if len < point.len() {
        return PROXIDENT_ERR_BUFFER_TOO_SMALL;
    }
    std::ptr::copy_nonoverlapping(point.as_ptr(), buf, point.len());
    PROXIDENT_OK
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;
    use std::ptr;

    unsafe fn make(name: &str, seed: u64) -> *mut ProxidentScenario {
        let cname = CString::new(name).unwrap();
        let mut handle: *mut ProxidentScenario = ptr::null_mut();
        assert_eq!(
            proxident_scenario_create(cname.as_ptr(), seed, &mut handle),
            PROXIDENT_OK
        );
        assert!(!handle.is_null());
        handle
    }

    #[test]
    fn lifecycle_and_run_through_c_surface() {
        unsafe {
            let scen = make("lasso", 42);
            let mut dim = 0usize;
            assert_eq!(proxident_scenario_dim(scen, &mut dim), PROXIDENT_OK);
            assert_eq!(dim, 128);

            let mut trace: *mut ProxidentTrace = ptr::null_mut();
            assert_eq!(
                proxident_run(scen, PROXIDENT_ALGO_APG, 2_000, &mut trace),
                PROXIDENT_OK
            );
            let mut len = 0usize;
            assert_eq!(proxident_trace_len(trace, &mut len), PROXIDENT_OK);
            assert_eq!(len, 2_000);
            let mut steps = 0usize;
            assert_eq!(proxident_trace_prox_steps(trace, &mut steps), PROXIDENT_OK);
            assert_eq!(steps, 2_000);
            let mut f = f64::NAN;
            assert_eq!(proxident_trace_final_f(trace, &mut f), PROXIDENT_OK);
            assert!(f.is_finite());

            let mut rec = ProxidentRecord {
                k: 0,
                prox_steps_cumulative: 0,
                f_value: 0.0,
                accelerated: -1,
                in_z: -1,
                signature_len: 0,
            };
            assert_eq!(proxident_trace_record(trace, 0, &mut rec), PROXIDENT_OK);
            assert_eq!(rec.k, 1);
            assert!(rec.accelerated == 0 || rec.accelerated == 1);
            assert_eq!(
                proxident_trace_record(trace, len, &mut rec),
                PROXIDENT_ERR_OUT_OF_RANGE
            );

            let mut point = vec![0.0f64; dim];
            let mut written = 0usize;
            assert_eq!(
                proxident_trace_final_point(trace, point.as_mut_ptr(), dim, &mut written),
                PROXIDENT_OK
            );
            assert_eq!(written, dim);
            assert!(point.iter().all(|v| v.is_finite()));

            let mut short = vec![0.0f64; 3];
            assert_eq!(
                proxident_trace_final_point(trace, short.as_mut_ptr(), 3, &mut written),
                PROXIDENT_ERR_BUFFER_TOO_SMALL
            );
            assert_eq!(written, dim);

            proxident_trace_free(trace);
            proxident_scenario_free(scen);
        }
    }

    #[test]
    fn determinism_across_handles() {
        unsafe {
            let mut finals = Vec::new();
            for _ in 0..2 {
                let scen = make("lasso", 7);
                let mut trace: *mut ProxidentTrace = ptr::null_mut();
                assert_eq!(
                    proxident_run(scen, PROXIDENT_ALGO_T2, 1_000, &mut trace),
                    PROXIDENT_OK
                );
                let mut f = 0.0f64;
                assert_eq!(proxident_trace_final_f(trace, &mut f), PROXIDENT_OK);
                finals.push(f.to_bits());
                proxident_trace_free(trace);
                proxident_scenario_free(scen);
            }
            assert_eq!(finals[0], finals[1]);
        }
    }

    #[test]
    fn error_paths() {
        unsafe {
            let mut handle: *mut ProxidentScenario = ptr::null_mut();
            let bogus = CString::new("no-such-scenario").unwrap();
            assert_eq!(
                proxident_scenario_create(bogus.as_ptr(), 1, &mut handle),
                PROXIDENT_ERR_UNKNOWN_SCENARIO
            );
            assert_eq!(
                proxident_scenario_create(ptr::null(), 1, &mut handle),
                PROXIDENT_ERR_NULL_POINTER
            );

            let scen = make("fixture-l1", 0);
            let mut trace: *mut ProxidentTrace = ptr::null_mut();
            assert_eq!(
                proxident_run(scen, 99, 100, &mut trace),
                PROXIDENT_ERR_INVALID_ARGUMENT
            );
            assert_eq!(
                proxident_run(ptr::null(), PROXIDENT_ALGO_PG, 100, &mut trace),
                PROXIDENT_ERR_NULL_POINTER
            );
            // budget 0 falls back to the scenario default
            assert_eq!(
                proxident_run(scen, PROXIDENT_ALGO_PG, 0, &mut trace),
                PROXIDENT_OK
            );
            let mut len = 0usize;
            assert_eq!(proxident_trace_len(trace, &mut len), PROXIDENT_OK);
            assert_eq!(len, proxident_default_budget(
                CString::new("fixture-l1").unwrap().as_ptr(),
            ));
            proxident_trace_free(trace);
            proxident_scenario_free(scen);

            // frees accept null
            proxident_trace_free(ptr::null_mut());
            proxident_scenario_free(ptr::null_mut());

            let msg = proxident_error_message(PROXIDENT_ERR_SOLVER);
            assert_eq!(CStr::from_ptr(msg).to_str().unwrap(), "solver failure");
        }
    }
}
