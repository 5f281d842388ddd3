//! C ABI over `tailspace`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free`. Every call returns a [`TsStatus`];
//! on failure [`ts_last_error_message`] describes the error for the calling
//! thread. Strings returned through out-pointers are released with
//! [`ts_string_free`]. Panics are caught and reported as
//! `TS_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tailspace::codes::LinearCode;
use tailspace::formats;
use tailspace::influence::total_pivotal;
use tailspace::verify::{kappa, run_sweep, CheckId, SweepConfig};
use tailspace::{fwht, heat, tail_level, CubeFunction, Error};

/// Result of every call. Library errors map one-to-one onto the reason
/// codes printed by the command-line tool.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    BufferTooSmall = 3,
    Panic = 4,
    Capacity = 10,
    Param = 11,
    Dimension = 12,
    Range = 13,
    Kind = 14,
    Coordinate = 15,
    Mean = 16,
    Generator = 17,
    Disconnected = 18,
    Tail = 19,
    SearchExhausted = 20,
    Infeasible = 21,
    Solver = 22,
    Format = 23,
    Io = 24,
    Json = 25,
}

impl From<&Error> for TsStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Capacity { .. } => TsStatus::Capacity,
            Error::InvalidParameter { .. } => TsStatus::Param,
            Error::DimensionMismatch { .. } => TsStatus::Dimension,
            Error::Range { .. } => TsStatus::Range,
            Error::WrongKind { .. } => TsStatus::Kind,
            Error::Coordinate { .. } => TsStatus::Coordinate,
            Error::NonZeroMean { .. } => TsStatus::Mean,
            Error::InvalidGenerator(_) => TsStatus::Generator,
            Error::Disconnected { .. } => TsStatus::Disconnected,
            Error::TailViolation { .. } => TsStatus::Tail,
            Error::SearchExhausted { .. } => TsStatus::SearchExhausted,
            Error::Infeasible(_) => TsStatus::Infeasible,
            Error::Solver(_) => TsStatus::Solver,
            Error::Format(_) => TsStatus::Format,
            Error::Io(_) => TsStatus::Io,
            Error::Json(_) => TsStatus::Json,
        }
    }
}

/// A real function on `{-1,1}^n`.
pub struct TsFunction {
    inner: CubeFunction,
}

/// A binary linear code.
pub struct TsCode {
    inner: LinearCode,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(TsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(TsStatus::from(&e), format!("{}: {e}", e.code()))
    }
}

fn null(what: &str) -> Failure {
    Failure(TsStatus::NullPointer, format!("null pointer: {what}"))
}

/// Runs `body`, records any failure and converts panics.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> TsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => TsStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside tailspace".into());
            TsStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(TsStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(TsStatus::Format, "string contains NUL".into()))?;
    put(out, c.into_raw(), "out")
}

unsafe fn fill(out: *mut f64, len: usize, values: &[f64]) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    if len < values.len() {
        return Err(Failure(
            TsStatus::BufferTooSmall,
            format!("buffer holds {len} values, need {}", values.len()),
        ));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    Ok(())
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ts_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ts_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn ts_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a function from `2^n` values; the kind is inferred.
///
/// # Safety
/// `values` must point to `len` readable doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_function_new(n: usize, values: *const f64, len: usize, out: *mut *mut TsFunction) -> TsStatus {
    guard(|| {
        if values.is_null() {
            return Err(null("values"));
        }
        if n >= usize::BITS as usize || len != 1usize << n {
            return Err(Failure(TsStatus::Dimension, format!("n = {n} needs 2^n values, got {len}")));
        }
        let v = std::slice::from_raw_parts(values, len).to_vec();
        let kind = CubeFunction::infer_kind(&v);
        let f = CubeFunction::new(n, v, kind)?;
        put(out, boxed(TsFunction { inner: f }), "out")
    })
}

/// Parses a function file.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ts_function_from_json(json: *const c_char, out: *mut *mut TsFunction) -> TsStatus {
    guard(|| {
        let (f, _) = formats::function_from_json(text(json, "json")?)?;
        put(out, boxed(TsFunction { inner: f }), "out")
    })
}

/// Serializes a function file; release the string with [`ts_string_free`].
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ts_function_to_json(f: *const TsFunction, out: *mut *mut c_char) -> TsStatus {
    guard(|| {
        let f = borrow(f, "f")?;
        put_string(out, formats::function_to_json(&f.inner, &Default::default())?)
    })
}

/// # Safety
/// `f` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn ts_function_free(f: *mut TsFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Number of input bits, or 0 for a null handle.
///
/// # Safety
/// `f` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ts_function_dim(f: *const TsFunction) -> usize {
    f.as_ref().map_or(0, |f| f.inner.n())
}

/// Copies the `2^n` values into `out`.
///
/// # Safety
/// `f` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ts_function_values(f: *const TsFunction, out: *mut f64, len: usize) -> TsStatus {
    guard(|| fill(out, len, borrow(f, "f")?.inner.values()))
}

/// Fourier coefficients indexed by subset bitmask.
///
/// # Safety
/// `f` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ts_fwht(f: *const TsFunction, out: *mut f64, len: usize) -> TsStatus {
    guard(|| fill(out, len, fwht(&borrow(f, "f")?.inner).coeffs()))
}

/// `P_t f` as a new handle.
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ts_heat(f: *const TsFunction, t: f64, out: *mut *mut TsFunction) -> TsStatus {
    guard(|| {
        let g = heat(&borrow(f, "f")?.inner, t)?;
        put(out, boxed(TsFunction { inner: g }), "out")
    })
}

/// Largest `k` with every coefficient of degree `1..=k` zero (and the mean
/// too when `include_constant`); `-1` when the mean is nonzero and
/// `include_constant` is set.
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ts_tail_level(f: *const TsFunction, include_constant: bool, out: *mut i64) -> TsStatus {
    guard(|| {
        let k = tail_level(&borrow(f, "f")?.inner, include_constant).map_or(-1, |k| k as i64);
        put(out, k, "out")
    })
}

/// `Σ_i P[f(x) != f(x ⊕ e_i)]` for a Boolean-valued function. `exact`, if
/// not null, receives the value as a `num/den` string.
///
/// # Safety
/// `f` must be a live handle; `value` must be writable; `exact` writable or null.
#[no_mangle]
pub unsafe extern "C" fn ts_total_pivotal(f: *const TsFunction, value: *mut f64, exact: *mut *mut c_char) -> TsStatus {
    guard(|| {
        let d = total_pivotal(&borrow(f, "f")?.inner)?;
        put(value, d.to_f64(), "value")?;
        if !exact.is_null() {
            put_string(exact, d.to_string())?;
        }
        Ok(())
    })
}

/// Span of `count` generator rows; bit `i` of a row is coordinate `i + 1`.
///
/// # Safety
/// `rows` must point to `count` readable words (or be null when `count` is
/// 0) and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_code_new(length: usize, rows: *const u32, count: usize, out: *mut *mut TsCode) -> TsStatus {
    guard(|| {
        let rows = if count == 0 {
            &[][..]
        } else if rows.is_null() {
            return Err(null("rows"));
        } else {
            std::slice::from_raw_parts(rows, count)
        };
        let code = LinearCode::new(length, rows)?;
        put(out, boxed(TsCode { inner: code }), "out")
    })
}

/// # Safety
/// `c` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn ts_code_free(c: *mut TsCode) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Dimension, or 0 for a null handle.
///
/// # Safety
/// `c` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ts_code_dim(c: *const TsCode) -> usize {
    c.as_ref().map_or(0, |c| c.inner.dim())
}

/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ts_code_dual(c: *const TsCode, out: *mut *mut TsCode) -> TsStatus {
    guard(|| {
        let d = borrow(c, "c")?.inner.dual();
        put(out, boxed(TsCode { inner: d }), "out")
    })
}

/// Least weight of a nonzero codeword; `UINT32_MAX` for the zero code.
///
/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ts_code_min_weight(c: *const TsCode, out: *mut u32) -> TsStatus {
    guard(|| {
        let w = borrow(c, "c")?.inner.min_weight()?.unwrap_or(u32::MAX);
        put(out, w, "out")
    })
}

/// `±1` indicator of the code as a function handle.
///
/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ts_code_indicator(c: *const TsCode, out: *mut *mut TsFunction) -> TsStatus {
    guard(|| {
        let f = borrow(c, "c")?.inner.indicator()?;
        put(out, boxed(TsFunction { inner: f }), "out")
    })
}

/// The sharp constant `κ(p)` for `p > 1`, `p != 2`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_kappa(p: f64, out: *mut f64) -> TsStatus {
    guard(|| put(out, kappa(p)?.value, "out"))
}

/// Runs one seeded sweep with default grids and reports its totals.
///
/// # Safety
/// `check_id` must be a NUL-terminated string; the out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn ts_run_sweep(
    check_id: *const c_char,
    trials: usize,
    seed: u64,
    n_max: usize,
    total: *mut usize,
    violations: *mut usize,
) -> TsStatus {
    guard(|| {
        let id: CheckId = text(check_id, "check_id")?.parse()?;
        let cfg = SweepConfig {
            trials,
            seed,
            n_max,
            ..SweepConfig::default()
        };
        let outcome = run_sweep(id, &cfg)?;
        put(total, outcome.total, "total")?;
        put(violations, outcome.violations, "violations")
    })
}
