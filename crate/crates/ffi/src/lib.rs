//! C ABI for the `cdsclear` clearing engine.
//!
//! Design:
//! - Every fallible function returns an `int32_t` status: [`CDSCLEAR_OK`] or one of the
//!   negative `CDSCLEAR_ERR_*` codes. The message of the last failure on the calling thread
//!   is available from [`cdsclear_last_error_message`].
//! - Systems and solve reports are opaque heap handles with explicit `_free` functions.
//! - Strings returned through `char **` out-parameters are owned by the caller and must be
//!   released with [`cdsclear_string_free`].
//! - Panics never cross the boundary; they are reported as [`CDSCLEAR_ERR_PANIC`].
//!
//! # Safety (blanket)
//!
//! All `unsafe extern "C"` functions share one contract: pointer arguments are valid and
//! non-null unless stated otherwise, input strings are NUL-terminated UTF-8, output
//! pointers are writable, and handles come from this library and are not used after being
//! freed. Null pointers are detected and reported as [`CDSCLEAR_ERR_NULL_POINTER`].
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cdsclear::analysis::{
    build_auxiliary_graph, export_dot, find_strongly_switched_cycle, find_weakly_switched_cycle,
};
use cdsclear::fragments::{assign_arithmetic, solve_cycle_closed_form, FragmentString};
use cdsclear::io::{instance_to_json, parse_instance, parse_vector};
use cdsclear::model::{clearing_residual, is_clearing};
use cdsclear::solvers::{
    solve_with_choice, IterationSettings, SolveReport, SolverChoice, SolverOptions,
};
use cdsclear::{Error, FinancialSystem};

/// Success.
pub const CDSCLEAR_OK: i32 = 0;
/// A required pointer argument was null.
pub const CDSCLEAR_ERR_NULL_POINTER: i32 = -1;
/// An input string was not valid UTF-8.
pub const CDSCLEAR_ERR_INVALID_UTF8: i32 = -2;
/// Input text could not be parsed.
pub const CDSCLEAR_ERR_PARSE: i32 = -3;
/// Input parsed but is invalid (unknown bank, malformed contract, bad vector, ...).
pub const CDSCLEAR_ERR_INVALID_INPUT: i32 = -4;
/// A precondition of the requested solver or construction is not met.
pub const CDSCLEAR_ERR_PRECONDITION: i32 = -5;
/// An index argument is out of range.
pub const CDSCLEAR_ERR_OUT_OF_RANGE: i32 = -6;
/// An internal panic was caught.
pub const CDSCLEAR_ERR_PANIC: i32 = -7;

/// Solver selection: acyclic, SCC procedure, branch enumeration, then iteration.
pub const CDSCLEAR_SOLVER_AUTO: i32 = 0;
/// Topological propagation on an acyclic auxiliary graph.
pub const CDSCLEAR_SOLVER_ACYCLIC: i32 = 1;
/// Branch enumeration for systems with dedicated CDS debtors.
pub const CDSCLEAR_SOLVER_DEDICATED: i32 = 2;
/// SCC-by-SCC procedure for systems without weakly switched cycles.
pub const CDSCLEAR_SOLVER_SCC: i32 = 3;
/// Damped fixed-point iteration.
pub const CDSCLEAR_SOLVER_ITERATE: i32 = 4;

/// Opaque financial system.
pub struct CdsclearSystem {
    inner: FinancialSystem,
}

/// Opaque solve report: one or more recovery vectors plus solver metadata.
pub struct CdsclearReport {
    inner: SolveReport,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) => CDSCLEAR_ERR_PARSE,
            e if e.is_precondition() => CDSCLEAR_ERR_PRECONDITION,
            _ => CDSCLEAR_ERR_INVALID_INPUT,
        };
        Failure(code, e.to_string())
    }
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

/// Runs `f`, converting failures and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            CDSCLEAR_OK
        }
        Ok(Err(Failure(code, msg))) => {
            set_last_error(&msg);
            code
        }
        Err(_) => {
            set_last_error("internal panic");
            CDSCLEAR_ERR_PANIC
        }
    }
}

fn null() -> Failure {
    Failure(CDSCLEAR_ERR_NULL_POINTER, "null pointer argument".into())
}

unsafe fn input_str<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(CDSCLEAR_ERR_INVALID_UTF8, e.to_string()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| Failure(CDSCLEAR_ERR_INVALID_INPUT, e.to_string()))?;
    if out.is_null() {
        return Err(null());
    }
    out.write(c.into_raw());
    Ok(())
}

fn solver_choice(solver: i32) -> Result<SolverChoice, Failure> {
    Ok(match solver {
        CDSCLEAR_SOLVER_AUTO => SolverChoice::Auto,
        CDSCLEAR_SOLVER_ACYCLIC => SolverChoice::Acyclic,
        CDSCLEAR_SOLVER_DEDICATED => SolverChoice::Dedicated,
        CDSCLEAR_SOLVER_SCC => SolverChoice::Scc,
        CDSCLEAR_SOLVER_ITERATE => SolverChoice::Iterate,
        other => {
            return Err(Failure(
                CDSCLEAR_ERR_OUT_OF_RANGE,
                format!("unknown solver code {other}"),
            ))
        }
    })
}

fn out_of_range(what: &str, index: usize, len: usize) -> Failure {
    Failure(
        CDSCLEAR_ERR_OUT_OF_RANGE,
        format!("{what} index {index} out of range (length {len})"),
    )
}

/// Message of the last failure on this thread (empty after a success). The pointer stays
/// valid until the next call into this library on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn cdsclear_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cdsclear_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cdsclear_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an instance document (JSON) into a new system handle.
#[no_mangle]
pub unsafe extern "C" fn cdsclear_system_from_json(
    json: *const c_char,
    out: *mut *mut CdsclearSystem,
) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let sys = parse_instance(input_str(json)?)?;
        write_out(out, Box::into_raw(Box::new(CdsclearSystem { inner: sys })))
    })
}

/// Serializes a system back to an instance document.
#[no_mangle]
pub unsafe extern "C" fn cdsclear_system_to_json(
    sys: *const CdsclearSystem,
    out: *mut *mut c_char,
) -> i32 {
    guard(|| write_string(out, instance_to_json(&handle(sys)?.inner)))
}

/// Releases a system handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cdsclear_system_free(sys: *mut CdsclearSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Number of banks.
#[no_mangle]
pub unsafe extern "C" fn cdsclear_system_bank_count(
    sys: *const CdsclearSystem,
    out: *mut usize,
) -> i32 {
    guard(|| write_out(out, handle(sys)?.inner.len()))
}

/// Id of bank `index`.
#[no_mangle]
pub unsafe extern "C" fn cdsclear_system_bank_id(
    sys: *const CdsclearSystem,
    index: usize,
    out: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let sys = &handle(sys)?.inner;
        if index >= sys.len() {
            return Err(out_of_range("bank", index, sys.len()));
        }
        write_string(out, sys.id(index).to_string())
    })
}

/// Graphviz DOT rendering of the system.
#[no_mangle]
pub unsafe extern "C" fn cdsclear_system_export_dot(
    sys: *const CdsclearSystem,
    out: *mut *mut c_char,
) -> i32 {
    guard(|| write_string(out, export_dot(&handle(sys)?.inner)))
}

/// Whether the auxiliary graph has a weakly switched cycle and a strongly switched cycle.
/// Either output pointer may be null to skip it.
#[no_mangle]
pub unsafe extern "C" fn cdsclear_system_switched_cycles(
    sys: *const CdsclearSystem,
    weakly: *mut bool,
    strongly: *mut bool,
) -> i32 {
    guard(|| {
        let aux = build_auxiliary_graph(&handle(sys)?.inner);
        if !weakly.is_null() {
            weakly.write(find_weakly_switched_cycle(&aux).is_some());
        }
        if !strongly.is_null() {
            strongly.write(find_strongly_switched_cycle(&aux).is_some());
        }
        Ok(())
    })
}

/// Solves for clearing recovery rates with one of the `CDSCLEAR_SOLVER_*` solvers.
/// `eps` and `max_iter` configure iteration (used by the iterate solver and the automatic
/// fallback). A report is produced even when iteration stops at `max_iter`; query
/// [`cdsclear_report_converged`].
#[no_mangle]
pub unsafe extern "C" fn cdsclear_solve(
    sys: *const CdsclearSystem,
    solver: i32,
    eps: f64,
    max_iter: usize,
    out: *mut *mut CdsclearReport,
) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let sys = &handle(sys)?.inner;
        let choice = solver_choice(solver)?;
        let iter = IterationSettings { eps, max_iter };
        let (report, _notes) = solve_with_choice(sys, choice, &SolverOptions::default(), iter)?;
        write_out(
            out,
            Box::into_raw(Box::new(CdsclearReport { inner: report })),
        )
    })
}

/// Releases a report handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cdsclear_report_free(report: *mut CdsclearReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Name of the solver that produced the report (`acyclic`, `dedicated`, `scc`, `iterate`).
#[no_mangle]
pub unsafe extern "C" fn cdsclear_report_solver(
    report: *const CdsclearReport,
    out: *mut *mut c_char,
) -> i32 {
    guard(|| write_string(out, handle(report)?.inner.solver.to_string()))
}

/// Number of recovery vectors in the report.
#[no_mangle]
pub unsafe extern "C" fn cdsclear_report_solution_count(
    report: *const CdsclearReport,
    out: *mut usize,
) -> i32 {
    guard(|| write_out(out, handle(report)?.inner.solutions.len()))
}

/// Whether the solver met its tolerance (always true for exact solvers).
#[no_mangle]
pub unsafe extern "C" fn cdsclear_report_converged(
    report: *const CdsclearReport,
    out: *mut bool,
) -> i32 {
    guard(|| write_out(out, handle(report)?.inner.converged))
}

/// Number of warnings attached to the report (e.g. coefficient growth).
#[no_mangle]
pub unsafe extern "C" fn cdsclear_report_warning_count(
    report: *const CdsclearReport,
    out: *mut usize,
) -> i32 {
    guard(|| write_out(out, handle(report)?.inner.warnings.len()))
}

fn rate(report: &SolveReport, solution: usize, bank: usize) -> Result<cdsclear::Number, Failure> {
    let r = report
        .solutions
        .get(solution)
        .ok_or_else(|| out_of_range("solution", solution, report.solutions.len()))?;
    if bank >= r.len() {
        return Err(out_of_range("bank", bank, r.len()));
    }
    Ok(r.get(bank))
}

/// Recovery rate of `bank` in solution `solution`, as a double.
#[no_mangle]
pub unsafe extern "C" fn cdsclear_report_rate(
    report: *const CdsclearReport,
    solution: usize,
    bank: usize,
    out: *mut f64,
) -> i32 {
    guard(|| write_out(out, rate(&handle(report)?.inner, solution, bank)?.to_f64()))
}

/// Recovery rate of `bank` in solution `solution` as text: `p/q` for exact rationals,
/// `(a + b*sqrt(d))/c` for surds, a decimal for floats.
#[no_mangle]
pub unsafe extern "C" fn cdsclear_report_rate_string(
    report: *const CdsclearReport,
    solution: usize,
    bank: usize,
    out: *mut *mut c_char,
) -> i32 {
    guard(|| {
        write_string(
            out,
            rate(&handle(report)?.inner, solution, bank)?.to_string(),
        )
    })
}

/// Residual `‖r − f(r)‖∞` of a recovery vector given as JSON (bank id → rate string) and
/// whether it is an exact clearing vector. The residual is written as an exact string.
#[no_mangle]
pub unsafe extern "C" fn cdsclear_verify_json(
    sys: *const CdsclearSystem,
    vector_json: *const c_char,
    residual: *mut *mut c_char,
    clearing: *mut bool,
) -> i32 {
    guard(|| {
        let sys = &handle(sys)?.inner;
        let r = parse_vector(input_str(vector_json)?, sys)?;
        let res = clearing_residual(sys, &r)?;
        let exact = is_clearing(sys, &r)?;
        write_string(residual, res.to_string())?;
        write_out(clearing, exact)
    })
}

/// Closed-form clearing rate of the start junction of a fragment cycle such as
/// `"g1a.g2b.d1.d2"`: the exact surd as text and its double value.
#[no_mangle]
pub unsafe extern "C" fn cdsclear_fragment_closed_form(
    fragments: *const c_char,
    expression: *mut *mut c_char,
    value: *mut f64,
) -> i32 {
    guard(|| {
        let cycle = FragmentString::parse(input_str(fragments)?)?.close_cycle()?;
        let rate = solve_cycle_closed_form(&assign_arithmetic(&cycle)?)?;
        write_string(expression, rate.to_string())?;
        write_out(value, rate.to_f64())
    })
}
