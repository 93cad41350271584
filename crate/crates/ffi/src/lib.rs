//! C interface to the exact engines and the numeric oracle.
//!
//! Results live behind opaque `TgReport` handles. Every fallible call
//! returns a `TgStatus`; the message for the most recent failure on the
//! calling thread is available from `tg_last_error`. Strings handed out by
//! the library must be released with `tg_string_free`, handles with
//! `tg_report_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use trajgreen::cli::commands::stark_sign_notes;
use trajgreen::cli::document::{ProblemEcho, ResultDocument, RunRecord};
use trajgreen::iterate1d::{run, Problem1D};
use trajgreen::oracle::{ground_energy_fd, numeric_dbar_1d, GridSpec, QuadratureConfig};
use trajgreen::stark3d::run_stark;
use trajgreen::{Engine, EpsSeries, Error, ParamScalar};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    SingularDivision = 4,
    DivergentInput = 5,
    MeanNotSubtracted = 6,
    CancellationFailure = 7,
    Quadrature = 8,
    Bisection = 9,
    Internal = 10,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TgEngine {
    Revised = 0,
    Old = 1,
}

/// The family of the 1D perturbation `U`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TgPotential {
    /// `U = x^{2p}`
    EvenPower = 0,
    /// `U = x^{2p+1}`
    OddPower = 1,
}

/// Opaque run result.
pub struct TgReport {
    doc: ResultDocument,
    deltas: Vec<EpsSeries<ParamScalar>>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> TgStatus {
    match e {
        Error::SingularDivision(_) => TgStatus::SingularDivision,
        Error::DivergentInput(_) => TgStatus::DivergentInput,
        Error::MeanNotSubtracted(_) => TgStatus::MeanNotSubtracted,
        Error::OmegaInInput | Error::NegativePower { .. } | Error::CancellationFailure(_) => {
            TgStatus::CancellationFailure
        }
        Error::Quadrature { .. } => TgStatus::Quadrature,
        Error::Bisection => TgStatus::Bisection,
        Error::Config(_) => TgStatus::InvalidArgument,
    }
}

fn fail(status: TgStatus, msg: impl Into<String>) -> TgStatus {
    set_error(msg);
    status
}

/// Runs `f`, turning engine errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), TgStatus>) -> TgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TgStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(TgStatus::Internal, "panic inside trajgreen"),
    }
}

fn engine_error(e: Error) -> TgStatus {
    fail(status_of(&e), e.to_string())
}

fn engine(e: TgEngine) -> Engine {
    match e {
        TgEngine::Revised => Engine::Revised,
        TgEngine::Old => Engine::Old,
    }
}

fn echo(
    system: &str,
    description: String,
    engine: Engine,
    order: usize,
    max_iter: usize,
) -> ProblemEcho {
    ProblemEcho {
        system: system.into(),
        description,
        engine: Some(engine),
        order_cap: order,
        max_iter,
        g_value: None,
        eps_value: None,
    }
}

unsafe fn store(out: *mut *mut TgReport, report: TgReport) {
    *out = Box::into_raw(Box::new(report));
}

/// Iterate `H = -½d²/dx² + ½g²x² + εU` with `U = x^{2p}` or `x^{2p+1}`,
/// keeping orders up to `order` in ε.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn tg_solve1d(
    potential: TgPotential,
    p: u32,
    order: u32,
    max_iter: u32,
    engine_kind: TgEngine,
    out: *mut *mut TgReport,
) -> TgStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(TgStatus::NullPointer, "out is null"));
        }
        if order == 0 || max_iter == 0 {
            return Err(fail(
                TgStatus::InvalidArgument,
                "order and max_iter must be positive",
            ));
        }
        let (problem, description) = match potential {
            TgPotential::EvenPower if p == 0 => {
                return Err(fail(TgStatus::InvalidArgument, "even power needs p >= 1"));
            }
            TgPotential::EvenPower => (
                Problem1D::even_power(p, order as usize),
                format!("U = x^{}", 2 * p),
            ),
            TgPotential::OddPower => (
                Problem1D::odd_power(p, order as usize),
                format!("U = x^{}", 2 * p + 1),
            ),
        };
        let problem = problem.with_max_iter(max_iter as usize);
        let e = engine(engine_kind);
        let report = run(&problem, e).map_err(engine_error)?;
        let mut doc = ResultDocument::new(
            "solve1d",
            echo("line", description, e, order as usize, max_iter as usize),
        );
        doc.runs.push(RunRecord::from_report(&report, None));
        let deltas = report.steps.iter().map(|s| s.delta.clone()).collect();
        store(out, TgReport { doc, deltas });
        Ok(())
    })
}

/// Iterate the hydrogen ground state in a field `εr cosθ`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn tg_stark(
    order: u32,
    max_iter: u32,
    engine_kind: TgEngine,
    out: *mut *mut TgReport,
) -> TgStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(TgStatus::NullPointer, "out is null"));
        }
        if max_iter == 0 {
            return Err(fail(TgStatus::InvalidArgument, "max_iter must be positive"));
        }
        let e = engine(engine_kind);
        let report = run_stark(e, order as usize, max_iter as usize).map_err(engine_error)?;
        let mut doc = ResultDocument::new(
            "stark",
            echo(
                "stark",
                "U = r cos(theta)".into(),
                e,
                order as usize,
                max_iter as usize,
            ),
        );
        doc.sign_notes = stark_sign_notes(report.final_delta());
        doc.runs.push(RunRecord::from_report(&report, None));
        let deltas = report.steps.iter().map(|s| s.delta.clone()).collect();
        store(out, TgReport { doc, deltas });
        Ok(())
    })
}

/// Number of iteration steps recorded; 0 for a null handle.
///
/// # Safety
/// `report` must be null or a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn tg_report_steps(report: *const TgReport) -> usize {
    report.as_ref().map_or(0, |r| r.deltas.len())
}

/// Whether the run ended on `state_n == state_{n-1}`.
///
/// # Safety
/// `report` must be null or a handle from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tg_report_fixed_point(
    report: *const TgReport,
    out: *mut bool,
) -> TgStatus {
    guard(|| {
        let r = report
            .as_ref()
            .ok_or_else(|| fail(TgStatus::NullPointer, "report is null"))?;
        if out.is_null() {
            return Err(fail(TgStatus::NullPointer, "out is null"));
        }
        *out = r.doc.runs[0].reached_fixed_point;
        Ok(())
    })
}

/// `Δ` after step `step` (1-based) evaluated at numeric `ε` and `g`.
///
/// # Safety
/// `report` must be null or a handle from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tg_report_delta_eval(
    report: *const TgReport,
    step: usize,
    eps: f64,
    g: f64,
    out: *mut f64,
) -> TgStatus {
    guard(|| {
        let r = report
            .as_ref()
            .ok_or_else(|| fail(TgStatus::NullPointer, "report is null"))?;
        if out.is_null() {
            return Err(fail(TgStatus::NullPointer, "out is null"));
        }
        let delta = step
            .checked_sub(1)
            .and_then(|i| r.deltas.get(i))
            .ok_or_else(|| {
                fail(
                    TgStatus::OutOfRange,
                    format!("step {step} outside 1..={}", r.deltas.len()),
                )
            })?;
        *out = delta.eval(eps, g);
        Ok(())
    })
}

fn into_c_string(s: String) -> *mut c_char {
    match CString::new(s) {
        Ok(c) => c.into_raw(),
        Err(_) => {
            set_error("string contained an interior NUL");
            ptr::null_mut()
        }
    }
}

/// Exact `Δ` after step `step` as text, e.g. `ε^2·(-11/8·g^-4) + O(ε^3)`.
/// Returns null on error. Free with `tg_string_free`.
///
/// # Safety
/// `report` must be null or a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn tg_report_delta_string(
    report: *const TgReport,
    step: usize,
) -> *mut c_char {
    let Some(r) = report.as_ref() else {
        set_error("report is null");
        return ptr::null_mut();
    };
    match step.checked_sub(1).and_then(|i| r.deltas.get(i)) {
        Some(d) => into_c_string(d.to_string()),
        None => {
            set_error(format!("step {step} outside 1..={}", r.deltas.len()));
            ptr::null_mut()
        }
    }
}

/// The full result document as JSON (schema version 1). Free with
/// `tg_string_free`.
///
/// # Safety
/// `report` must be null or a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn tg_report_json(report: *const TgReport) -> *mut c_char {
    let Some(r) = report.as_ref() else {
        set_error("report is null");
        return ptr::null_mut();
    };
    match r.doc.to_json() {
        Ok(s) => into_c_string(s),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `report` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tg_report_free(report: *mut TgReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

unsafe fn poly_closure(coeffs: *const f64, len: usize) -> Result<Vec<f64>, TgStatus> {
    if len == 0 {
        return Ok(Vec::new());
    }
    if coeffs.is_null() {
        return Err(fail(TgStatus::NullPointer, "coeffs is null"));
    }
    Ok(std::slice::from_raw_parts(coeffs, len).to_vec())
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

/// Lowest eigenvalue of `-½d²/dx² + V` on `[-half_width, half_width]` with
/// `V(x) = Σ coeffs[k] x^k`, on `points` grid points (odd, ≥ 3).
///
/// # Safety
/// `coeffs` must point to `len` doubles (or be null with `len == 0`);
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tg_ground_energy_fd(
    coeffs: *const f64,
    len: usize,
    half_width: f64,
    points: usize,
    out: *mut f64,
) -> TgStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(TgStatus::NullPointer, "out is null"));
        }
        let c = poly_closure(coeffs, len)?;
        let grid = GridSpec::new(half_width, points).map_err(engine_error)?;
        *out = ground_energy_fd(|x| horner(&c, x), &grid).map_err(engine_error)?;
        Ok(())
    })
}

/// Numeric `D̄u` at `x` for `u(z) = Σ coeffs[k] z^k`, after subtracting
/// the Gaussian mean of `u`.
///
/// # Safety
/// As for `tg_ground_energy_fd`.
#[no_mangle]
pub unsafe extern "C" fn tg_numeric_dbar_1d(
    coeffs: *const f64,
    len: usize,
    x: f64,
    g: f64,
    out: *mut f64,
) -> TgStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(TgStatus::NullPointer, "out is null"));
        }
        let c = poly_closure(coeffs, len)?;
        *out = numeric_dbar_1d(|z| horner(&c, z), x, g, &QuadratureConfig::default())
            .map_err(engine_error)?;
        Ok(())
    })
}
