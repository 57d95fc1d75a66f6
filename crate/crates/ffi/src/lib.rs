//! C interface to `hullcensus`.
//!
//! Conventions:
//! - Every fallible function returns an [`HcStatus`]; on failure a message is
//!   available from [`hc_last_error_message`] on the same thread.
//! - Exact counts cross the boundary as NUL-terminated decimal strings written
//!   into caller buffers. If the buffer is too small the call returns
//!   `HC_STATUS_BUFFER_TOO_SMALL` and stores the required size (including the
//!   terminator) in `*needed`.
//! - Handles are opaque and owned by the caller; release them with the
//!   matching `_free` function. Passing NULL to a `_free` function is a no-op.
//! - Panics never cross the boundary; they surface as `HC_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use hullcensus::census::{self, HullSpectrum, Method};
use hullcensus::gf::{Code, Field, Matrix};
use hullcensus::{brute, ratio, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HcStatus {
    Ok = 0,
    /// Parameters outside the operation's domain.
    Domain = 1,
    /// An exact division left a remainder.
    Integrality = 2,
    /// The next count is zero, so the ratio is undefined.
    DegenerateRatio = 3,
    /// The request exceeds a resource guard.
    Guard = 4,
    Unsupported = 5,
    /// Two computations of the same quantity disagreed.
    Mismatch = 6,
    NullPointer = 7,
    BufferTooSmall = 8,
    Io = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HcMethod {
    /// Product formula chosen by the parity of q.
    Auto = 0,
    Sendrier = 1,
    Product = 2,
    Brute = 3,
}

/// Counts of [n, k]_q codes by hull dimension.
pub struct HcSpectrum(HullSpectrum);

/// A linear code.
pub struct HcCode(Code);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> HcStatus {
    match e {
        Error::Domain(_) => HcStatus::Domain,
        Error::Integrality { .. } => HcStatus::Integrality,
        Error::DegenerateRatio { .. } => HcStatus::DegenerateRatio,
        Error::GuardExceeded { .. } => HcStatus::Guard,
        Error::Unsupported(_) => HcStatus::Unsupported,
        Error::Mismatch(_) => HcStatus::Mismatch,
        Error::Io(_) | Error::Json(_) => HcStatus::Io,
    }
}

/// Runs `f`, converting errors and panics into a status plus last-error text.
fn guarded<F>(f: F) -> HcStatus
where
    F: FnOnce() -> Result<(), (HcStatus, String)>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            HcStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            HcStatus::Panic
        }
    }
}

fn lib<T>(r: hullcensus::Result<T>) -> Result<T, (HcStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (HcStatus, String) {
    (HcStatus::NullPointer, format!("{what} is NULL"))
}

/// Copies `s` plus a terminator into `buf`, or reports the size needed.
///
/// # Safety
/// `buf` must be valid for `cap` bytes; `needed` may be NULL.
unsafe fn write_str(
    s: &str,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> Result<(), (HcStatus, String)> {
    let size = s.len() + 1;
    if !needed.is_null() {
        *needed = size;
    }
    if buf.is_null() || cap < size {
        return Err((
            HcStatus::BufferTooSmall,
            format!("buffer holds {cap} bytes, {size} needed"),
        ));
    }
    std::ptr::copy_nonoverlapping(s.as_ptr(), buf as *mut u8, s.len());
    *buf.add(s.len()) = 0;
    Ok(())
}

fn method_of(m: HcMethod, q: u32) -> Method {
    match m {
        HcMethod::Auto | HcMethod::Product => Method::product_for(q),
        HcMethod::Sendrier => Method::Sendrier,
        HcMethod::Brute => Method::BruteForce,
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn hc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Number of [n, k]_q codes with hull dimension l, as a decimal string.
///
/// # Safety
/// `buf` must be valid for `cap` bytes; `needed` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn hc_count(
    n: u32,
    k: u32,
    l: u32,
    q: u32,
    method: HcMethod,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> HcStatus {
    guarded(|| {
        let c = if method == HcMethod::Brute {
            lib(brute::brute_spectrum(n, k, q)).and_then(|s| {
                s.counts.get(l as usize).cloned().ok_or((
                    HcStatus::Domain,
                    format!("hull dimension {l} exceeds k = {k}"),
                ))
            })?
        } else {
            lib(census::count(n, k, l, q, method_of(method, q)))?
        };
        write_str(&c.to_string(), buf, cap, needed)
    })
}

/// Computes the hull spectrum of [n, k]_q codes.
///
/// # Safety
/// `out` must be a valid pointer; on success it receives a handle to free
/// with [`hc_spectrum_free`].
#[no_mangle]
pub unsafe extern "C" fn hc_spectrum(
    n: u32,
    k: u32,
    q: u32,
    method: HcMethod,
    out: *mut *mut HcSpectrum,
) -> HcStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = lib(census::spectrum(n, k, q, method_of(method, q)))?;
        *out = Box::into_raw(Box::new(HcSpectrum(s)));
        Ok(())
    })
}

/// Number of entries (k + 1) in a spectrum; 0 for NULL.
///
/// # Safety
/// `s` must be NULL or a live spectrum handle.
#[no_mangle]
pub unsafe extern "C" fn hc_spectrum_len(s: *const HcSpectrum) -> usize {
    s.as_ref().map_or(0, |s| s.0.counts.len())
}

/// Entry l of a spectrum as a decimal string.
///
/// # Safety
/// `s` must be a live spectrum handle, `buf` valid for `cap` bytes; `needed`
/// may be NULL.
#[no_mangle]
pub unsafe extern "C" fn hc_spectrum_count(
    s: *const HcSpectrum,
    l: usize,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> HcStatus {
    guarded(|| {
        let s = s.as_ref().ok_or_else(|| null("spectrum"))?;
        let c =
            s.0.counts
                .get(l)
                .ok_or((HcStatus::Domain, format!("index {l} out of range")))?;
        write_str(&c.to_string(), buf, cap, needed)
    })
}

/// # Safety
/// `s` must be NULL or a handle from [`hc_spectrum`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hc_spectrum_free(s: *mut HcSpectrum) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// The exact ratio A_l / A_(l+1) as "numerator/denominator".
///
/// # Safety
/// `buf` must be valid for `cap` bytes; `needed` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn hc_ratio(
    n: u32,
    k: u32,
    l: u32,
    q: u32,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> HcStatus {
    guarded(|| {
        let r = lib(ratio::count_ratio(n, k, l, q))?;
        write_str(&r.to_string(), buf, cap, needed)
    })
}

/// The floor of A_l / A_(l+1) as a decimal string.
///
/// # Safety
/// `buf` must be valid for `cap` bytes; `needed` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn hc_mu(
    n: u32,
    k: u32,
    l: u32,
    q: u32,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> HcStatus {
    guarded(|| {
        let m = lib(ratio::mu(n, k, l, q))?;
        write_str(&m.to_string(), buf, cap, needed)
    })
}

/// Builds the code spanned by the rows of a k x n generator matrix over
/// GF(q). Entries are row-major integers in 0..q (polynomial-basis
/// encoding). Dependent rows are allowed; the dimension is the rank.
///
/// # Safety
/// `entries` must be valid for k * n bytes (it may be NULL when k * n = 0);
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_code_new(
    q: u32,
    k: usize,
    n: usize,
    entries: *const u8,
    out: *mut *mut HcCode,
) -> HcStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let len = k
            .checked_mul(n)
            .ok_or((HcStatus::Domain, "k * n overflows".to_string()))?;
        let data = if len == 0 {
            Vec::new()
        } else if entries.is_null() {
            return Err(null("entries"));
        } else {
            std::slice::from_raw_parts(entries, len).to_vec()
        };
        let f = lib(Field::of_order(q))?;
        let m = lib(Matrix::new(f, k, n, data))?;
        *out = Box::into_raw(Box::new(HcCode(Code::from_generator(&m))));
        Ok(())
    })
}

/// Parses a code from rows of digits separated by ';' or newlines, for
/// example "1100;0011".
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_code_parse(
    q: u32,
    text: *const c_char,
    out: *mut *mut HcCode,
) -> HcStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if text.is_null() {
            return Err(null("text"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| (HcStatus::Domain, "text is not UTF-8".to_string()))?;
        let rows: Vec<&str> = s
            .split([';', '\n'])
            .map(str::trim)
            .filter(|r| !r.is_empty())
            .collect();
        let f = lib(Field::of_order(q))?;
        let c = lib(Code::parse(f, &rows))?;
        *out = Box::into_raw(Box::new(HcCode(c)));
        Ok(())
    })
}

/// # Safety
/// `c` must be NULL or a code handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hc_code_free(c: *mut HcCode) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Length, or 0 for NULL.
///
/// # Safety
/// `c` must be NULL or a live code handle.
#[no_mangle]
pub unsafe extern "C" fn hc_code_length(c: *const HcCode) -> usize {
    c.as_ref().map_or(0, |c| c.0.length())
}

/// Dimension, or 0 for NULL.
///
/// # Safety
/// `c` must be NULL or a live code handle.
#[no_mangle]
pub unsafe extern "C" fn hc_code_dimension(c: *const HcCode) -> usize {
    c.as_ref().map_or(0, |c| c.0.dimension())
}

/// # Safety
/// `c` must be a live code handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_code_hull_dimension(c: *const HcCode, out: *mut usize) -> HcStatus {
    guarded(|| {
        let c = c.as_ref().ok_or_else(|| null("code"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = c.0.hull_dimension();
        Ok(())
    })
}

/// The Euclidean dual, as a new handle.
///
/// # Safety
/// `c` must be a live code handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_code_dual(c: *const HcCode, out: *mut *mut HcCode) -> HcStatus {
    guarded(|| {
        let c = c.as_ref().ok_or_else(|| null("code"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = Box::into_raw(Box::new(HcCode(c.0.dual())));
        Ok(())
    })
}

/// Minimum distance; -1 for the zero code.
///
/// # Safety
/// `c` must be a live code handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_code_min_distance(c: *const HcCode, out: *mut i64) -> HcStatus {
    guarded(|| {
        let c = c.as_ref().ok_or_else(|| null("code"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = lib(c.0.min_distance())?.map_or(-1, |d| d as i64);
        Ok(())
    })
}

/// Minimum distance of the dual; -1 when the dual is the zero code.
///
/// # Safety
/// `c` must be a live code handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_code_dual_distance(c: *const HcCode, out: *mut i64) -> HcStatus {
    guarded(|| {
        let c = c.as_ref().ok_or_else(|| null("code"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = lib(c.0.dual_distance())?.map_or(-1, |d| d as i64);
        Ok(())
    })
}

/// Whether every codeword has even weight (binary codes only).
///
/// # Safety
/// `c` must be a live code handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_code_is_even(c: *const HcCode, out: *mut bool) -> HcStatus {
    guarded(|| {
        let c = c.as_ref().ok_or_else(|| null("code"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = lib(c.0.is_even())?;
        Ok(())
    })
}

/// # Safety
/// `c` must be a live code handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_code_is_self_orthogonal(c: *const HcCode, out: *mut bool) -> HcStatus {
    guarded(|| {
        let c = c.as_ref().ok_or_else(|| null("code"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = c.0.is_self_orthogonal();
        Ok(())
    })
}

/// # Safety
/// `c` must be a live code handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_code_is_lcd(c: *const HcCode, out: *mut bool) -> HcStatus {
    guarded(|| {
        let c = c.as_ref().ok_or_else(|| null("code"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = c.0.is_lcd();
        Ok(())
    })
}
