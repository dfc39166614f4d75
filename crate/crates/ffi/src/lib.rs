//! C interface to the qgauss evaluators.
//!
//! Handles are opaque and owned by the caller once returned through an out
//! pointer; release them with the matching `*_free`. Every fallible call
//! returns a [`QgStatus`] and, on failure, stores a message retrievable with
//! [`qg_last_error_message`] on the same thread.

use qgauss::asymptotic::{optimal_truncation, remainder_bound, theorem1_eval};
use qgauss::exact::{exact_sum_report, TailPolicy};
use qgauss::expr::eval_str;
use qgauss::gauss::{direct_sum, normalize_params, GaussParams, NormalizationRecord};
use qgauss::{GaussError, PrecisionContext};
use rug::{Complex, Float};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QgStatus {
    Ok = 0,
    /// Null pointer or non-UTF-8 string argument.
    InvalidArgument = 1,
    Syntax = 2,
    Domain = 3,
    Precision = 4,
    Resource = 5,
    Truncation = 6,
    /// A Rust panic was caught at the boundary.
    Internal = 7,
}

/// Working precision.
pub struct QgContext {
    ctx: PrecisionContext,
}

/// Normalised parameters `(x, theta, N)` plus the mapping back to the raw input.
pub struct QgParams {
    params: GaussParams,
    record: NormalizationRecord,
}

/// Outcome of one evaluation.
pub struct QgReport {
    value: Complex,
    digits: u32,
    bound: f64,
    terms: u32,
    optimal_n: u64,
    divergent: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &GaussError) -> QgStatus {
    match e {
        GaussError::Syntax { .. } | GaussError::UnknownIdentifier { .. } => QgStatus::Syntax,
        GaussError::Domain(_) => QgStatus::Domain,
        GaussError::Precision(_) => QgStatus::Precision,
        GaussError::Resource(_) => QgStatus::Resource,
        GaussError::Truncation(_) => QgStatus::Truncation,
    }
}

fn fail(e: GaussError) -> QgStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn invalid(what: &str) -> QgStatus {
    set_error(format!("invalid argument: {what}"));
    QgStatus::InvalidArgument
}

fn guard(f: impl FnOnce() -> Result<(), QgStatus>) -> QgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QgStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal error: panic caught at the C boundary".into());
            QgStatus::Internal
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, QgStatus> {
    p.as_ref().ok_or_else(|| invalid(what))
}

unsafe fn string<'a>(p: *const c_char, what: &str) -> Result<&'a str, QgStatus> {
    if p.is_null() {
        return Err(invalid(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(what))
}

unsafe fn emit<T>(out: *mut *mut T, v: T) -> Result<(), QgStatus> {
    if out.is_null() {
        return Err(invalid("null out pointer"));
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Creates a context with `digits` significant decimal digits (15 to 500).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qg_context_new(digits: u32, out: *mut *mut QgContext) -> QgStatus {
    guard(|| {
        let ctx = PrecisionContext::new(digits).map_err(fail)?;
        emit(out, QgContext { ctx })
    })
}

/// # Safety
/// `ctx` must come from [`qg_context_new`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qg_context_free(ctx: *mut QgContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// # Safety
/// `ctx` must be a live context or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn qg_context_digits(ctx: *const QgContext) -> u32 {
    ctx.as_ref().map_or(0, |c| c.ctx.digits())
}

/// # Safety
/// `ctx` must be a live context or null (returns NaN).
#[no_mangle]
pub unsafe extern "C" fn qg_context_eps(ctx: *const QgContext) -> f64 {
    ctx.as_ref().map_or(f64::NAN, |c| c.ctx.eps_f64())
}

fn make_params(x: &Float, theta: &Float, n: u64, ctx: &PrecisionContext) -> Result<QgParams, QgStatus> {
    let (params, record) = normalize_params(x, theta, n, ctx).map_err(fail)?;
    Ok(QgParams { params, record })
}

/// Parses `x` and `theta` as number expressions (`1/(250*sqrt(pi))`, `-0.125`)
/// at the precision of `ctx` and reduces them to `0 < x < 1`, `|theta| <= 1/2`.
///
/// # Safety
/// `ctx`, `x`, `theta` must be valid; the strings NUL-terminated UTF-8.
#[no_mangle]
pub unsafe extern "C" fn qg_params_new(
    ctx: *const QgContext,
    x: *const c_char,
    theta: *const c_char,
    n: u64,
    out: *mut *mut QgParams,
) -> QgStatus {
    guard(|| {
        let c = &deref(ctx, "null context")?.ctx;
        let xv = eval_str(string(x, "x")?, c).map_err(fail)?;
        let tv = eval_str(string(theta, "theta")?, c).map_err(fail)?;
        emit(out, make_params(&xv, &tv, n, c)?)
    })
}

/// Same as [`qg_params_new`] with binary64 inputs taken as exact.
///
/// # Safety
/// `ctx` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qg_params_from_f64(
    ctx: *const QgContext,
    x: f64,
    theta: f64,
    n: u64,
    out: *mut *mut QgParams,
) -> QgStatus {
    guard(|| {
        let c = &deref(ctx, "null context")?.ctx;
        if !x.is_finite() || !theta.is_finite() {
            return Err(fail(GaussError::Domain("x and theta must be finite".into())));
        }
        emit(out, make_params(&c.float(x), &c.float(theta), n, c)?)
    })
}

/// # Safety
/// `p` must come from a params constructor and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qg_params_free(p: *mut QgParams) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Direct summation. The report bound is NaN.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qg_direct_sum(
    ctx: *const QgContext,
    params: *const QgParams,
    out: *mut *mut QgReport,
) -> QgStatus {
    guard(|| {
        let c = &deref(ctx, "null context")?.ctx;
        let p = deref(params, "null params")?;
        let v = direct_sum(&p.params, c).map_err(fail)?;
        emit(
            out,
            QgReport {
                value: p.record.restore(&v),
                digits: c.digits(),
                bound: f64::NAN,
                terms: 0,
                optimal_n: 0,
                divergent: false,
            },
        )
    })
}

/// Exact erfc representation. `tol <= 0` selects the context epsilon. The
/// report bound is the certified tail error; terms is 0.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qg_exact_sum(
    ctx: *const QgContext,
    params: *const QgParams,
    tol: f64,
    out: *mut *mut QgReport,
) -> QgStatus {
    guard(|| {
        let c = &deref(ctx, "null context")?.ctx;
        let p = deref(params, "null params")?;
        let policy = if tol > 0.0 {
            TailPolicy::new(tol, c).map_err(fail)?
        } else {
            TailPolicy::for_context(c)
        };
        let rep = exact_sum_report(&p.params, &policy, c).map_err(fail)?;
        emit(
            out,
            QgReport {
                value: p.record.restore(&rep.value),
                digits: c.digits(),
                bound: rep.i_n.tail_bound + rep.i_0.tail_bound,
                terms: 0,
                optimal_n: 0,
                divergent: false,
            },
        )
    })
}

/// Asymptotic expansion with `n` series terms; `n = 0` selects the default.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qg_theorem1_eval(
    ctx: *const QgContext,
    params: *const QgParams,
    n: u32,
    out: *mut *mut QgReport,
) -> QgStatus {
    guard(|| {
        let c = &deref(ctx, "null context")?.ctx;
        let p = deref(params, "null params")?;
        let rep = theorem1_eval(&p.params, (n > 0).then_some(n), c).map_err(fail)?;
        emit(
            out,
            QgReport {
                value: p.record.restore(&rep.value),
                digits: c.digits(),
                bound: rep.remainder_bound,
                terms: rep.n_used,
                optimal_n: rep.optimal_n,
                divergent: rep.divergent,
            },
        )
    })
}

/// # Safety
/// `report` must be valid; `re` and `im` may each be null.
#[no_mangle]
pub unsafe extern "C" fn qg_report_value(report: *const QgReport, re: *mut f64, im: *mut f64) -> QgStatus {
    guard(|| {
        let r = deref(report, "null report")?;
        if let Some(p) = re.as_mut() {
            *p = r.value.real().to_f64();
        }
        if let Some(p) = im.as_mut() {
            *p = r.value.imag().to_f64();
        }
        Ok(())
    })
}

/// Writes the real (`imag = false`) or imaginary part in scientific notation
/// with the context's digits into `buf`, truncating to `cap - 1` bytes.
/// Returns the length needed including the terminating NUL, or 0 when
/// `report` is null.
///
/// # Safety
/// `buf` must point to `cap` writable bytes, or be null with `cap = 0`.
#[no_mangle]
pub unsafe extern "C" fn qg_report_value_string(
    report: *const QgReport,
    imag: bool,
    buf: *mut c_char,
    cap: usize,
) -> usize {
    let Some(r) = report.as_ref() else {
        invalid("null report");
        return 0;
    };
    let part = if imag { r.value.imag() } else { r.value.real() };
    let s = if part.is_zero() {
        "0e0".to_string()
    } else {
        format!("{:.*e}", r.digits.saturating_sub(1) as usize, part)
    };
    if !buf.is_null() && cap > 0 {
        let n = s.len().min(cap - 1);
        ptr::copy_nonoverlapping(s.as_ptr(), buf.cast::<u8>(), n);
        *buf.add(n) = 0;
    }
    s.len() + 1
}

/// Remainder bound of the report; NaN for direct sums.
///
/// # Safety
/// `report` must be a live report or null (returns NaN).
#[no_mangle]
pub unsafe extern "C" fn qg_report_bound(report: *const QgReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.bound)
}

/// Series terms used by an expansion report, else 0.
///
/// # Safety
/// `report` must be a live report or null.
#[no_mangle]
pub unsafe extern "C" fn qg_report_terms(report: *const QgReport) -> u32 {
    report.as_ref().map_or(0, |r| r.terms)
}

/// Optimal truncation index recorded by an expansion report, else 0.
///
/// # Safety
/// `report` must be a live report or null.
#[no_mangle]
pub unsafe extern "C" fn qg_report_optimal_n(report: *const QgReport) -> u64 {
    report.as_ref().map_or(0, |r| r.optimal_n)
}

/// Whether the expansion ran at or past its optimal truncation.
///
/// # Safety
/// `report` must be a live report or null.
#[no_mangle]
pub unsafe extern "C" fn qg_report_divergent(report: *const QgReport) -> bool {
    report.as_ref().is_some_and(|r| r.divergent)
}

/// # Safety
/// `report` must come from an evaluation call and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qg_report_free(report: *mut QgReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Remainder bound for `n` terms at `(x, eps, theta)`, independent of `N`.
///
/// # Safety
/// `ctx` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qg_remainder_bound(
    ctx: *const QgContext,
    n: u32,
    x: f64,
    eps: f64,
    theta: f64,
    out: *mut f64,
) -> QgStatus {
    guard(|| {
        let c = &deref(ctx, "null context")?.ctx;
        if out.is_null() {
            return Err(invalid("null out pointer"));
        }
        if !(x > 0.0 && x < 1.0) {
            return Err(fail(GaussError::Domain(format!("x must lie in (0, 1), got {x}"))));
        }
        let b = remainder_bound(n, &c.float(x), &c.float(eps), &c.float(theta), c).map_err(fail)?;
        *out = b;
        Ok(())
    })
}

/// Index near which the series terms stop decreasing.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qg_optimal_truncation(x: f64, eps: f64, out: *mut u64) -> QgStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("null out pointer"));
        }
        if !(x > 0.0 && x < 1.0 && eps.abs() <= 0.5) {
            return Err(fail(GaussError::Domain(format!(
                "need 0 < x < 1 and |eps| <= 1/2, got x = {x}, eps = {eps}"
            ))));
        }
        *out = optimal_truncation(&Float::with_val(64, x), &Float::with_val(64, eps));
        Ok(())
    })
}
