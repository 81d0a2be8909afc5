//! C ABI over `cfsum`.
//!
//! Surds cross the boundary as opaque `CfsumSurd` handles; strings returned
//! by the library are owned by the caller and released with
//! [`cfsum_string_free`]. Every fallible call returns a [`CfsumStatus`] and
//! leaves a message retrievable with [`cfsum_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cfsum::exactnum::QuadraticSurd;
use cfsum::{cfrac, errsum, exactnum, units, Error};
use num_bigint::BigInt;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfsumStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    Arithmetic = 5,
    FieldMismatch = 6,
    Length = 7,
    Degenerate = 8,
    PrecisionExhausted = 9,
    Internal = 10,
}

impl From<&Error> for CfsumStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) => CfsumStatus::Domain,
            Error::Arithmetic(_) => CfsumStatus::Arithmetic,
            Error::FieldMismatch(..) => CfsumStatus::FieldMismatch,
            Error::Length { .. } => CfsumStatus::Length,
            Error::Degenerate(_) => CfsumStatus::Degenerate,
            Error::Parse(_) => CfsumStatus::Parse,
            Error::PrecisionExhausted(_) => CfsumStatus::PrecisionExhausted,
            Error::Internal(_) => CfsumStatus::Internal,
        }
    }
}

/// Opaque handle to an exact element `(a + b sqrt(D)) / c`.
pub struct CfsumSurd(QuadraticSurd);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), (CfsumStatus, String)>) -> CfsumStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CfsumStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside cfsum");
            CfsumStatus::Internal
        }
    }
}

fn lib<T>(r: cfsum::Result<T>) -> Result<T, (CfsumStatus, String)> {
    r.map_err(|e| (CfsumStatus::from(&e), e.to_string()))
}

fn null(what: &str) -> (CfsumStatus, String) {
    (CfsumStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (CfsumStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (CfsumStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn read_surd<'a>(p: *const CfsumSurd, what: &str) -> Result<&'a QuadraticSurd, (CfsumStatus, String)> {
    p.as_ref().map(|s| &s.0).ok_or_else(|| null(what))
}

unsafe fn write_surd(out: *mut *mut CfsumSurd, x: QuadraticSurd) -> Result<(), (CfsumStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(CfsumSurd(x)));
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (CfsumStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|_| (CfsumStatus::Internal, "interior NUL in output".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn cfsum_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses `(a+b*sqrt(D))/c`, an integer, or a rational `p/q`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfsum_surd_parse(text: *const c_char, out: *mut *mut CfsumSurd) -> CfsumStatus {
    guard(|| {
        let t = read_str(text, "text")?;
        write_surd(out, lib(exactnum::parse_surd(t))?)
    })
}

/// The purely periodic number with period `digits[0..len]`.
///
/// # Safety
/// `digits` must point to `len` readable integers; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfsum_surd_from_word(digits: *const i64, len: usize, out: *mut *mut CfsumSurd) -> CfsumStatus {
    guard(|| {
        if digits.is_null() && len > 0 {
            return Err(null("digits"));
        }
        let word: Vec<BigInt> = if len == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(digits, len).iter().map(|&d| d.into()).collect()
        };
        write_surd(out, lib(cfrac::surd_from_word(&word))?)
    })
}

/// # Safety
/// `x` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cfsum_surd_free(x: *mut CfsumSurd) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

/// Canonical text form, parseable by [`cfsum_surd_parse`].
///
/// # Safety
/// `x` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfsum_surd_to_string(x: *const CfsumSurd, out: *mut *mut c_char) -> CfsumStatus {
    guard(|| {
        let x = read_surd(x, "x")?;
        write_string(out, x.to_string())
    })
}

/// Nearest double.
///
/// # Safety
/// `x` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfsum_surd_to_f64(x: *const CfsumSurd, out: *mut f64) -> CfsumStatus {
    guard(|| {
        let x = read_surd(x, "x")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = cfsum::numeric::eval_surd(x, 64).to_f64();
        Ok(())
    })
}

/// Exact equality.
///
/// # Safety
/// `x` and `y` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfsum_surd_equal(x: *const CfsumSurd, y: *const CfsumSurd, out: *mut bool) -> CfsumStatus {
    guard(|| {
        let (x, y) = (read_surd(x, "x")?, read_surd(y, "y")?);
        if out.is_null() {
            return Err(null("out"));
        }
        *out = x == y;
        Ok(())
    })
}

/// Continued fraction of an irrational `x` as `[a0;p0,p1,...]`.
///
/// # Safety
/// `x` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfsum_expand(x: *const CfsumSurd, out: *mut *mut c_char) -> CfsumStatus {
    guard(|| {
        let x = read_surd(x, "x")?;
        write_string(out, lib(cfrac::expand(x))?.to_string())
    })
}

/// Exact weighted error sum `f(s)` for purely periodic `xi` and integer `s >= 1`.
///
/// # Safety
/// `xi` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfsum_errorsum(xi: *const CfsumSurd, s: u32, out: *mut *mut CfsumSurd) -> CfsumStatus {
    guard(|| {
        let xi = read_surd(xi, "xi")?;
        write_surd(out, lib(errsum::f_weighted(xi, s))?.f)
    })
}

/// Unit `k_{N-1} xi + k_{N-2}` of the primitive period and its norm.
///
/// # Safety
/// `xi` must be a live handle; `out` and `norm` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfsum_fundamental_unit(
    xi: *const CfsumSurd,
    out: *mut *mut CfsumSurd,
    norm: *mut i32,
) -> CfsumStatus {
    guard(|| {
        let xi = read_surd(xi, "xi")?;
        if norm.is_null() {
            return Err(null("norm"));
        }
        let r = lib(units::fundamental_unit(xi))?;
        write_surd(out, r.u)?;
        *norm = r.norm as i32;
        Ok(())
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cfsum_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
