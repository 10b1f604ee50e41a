//! C ABI over `rpp-core`.
//!
//! Handles are opaque pointers created by `*_new` and released by `*_free`.
//! Every fallible call returns an [`RppStatus`]; the message for the most
//! recent failure on the calling thread is available from
//! [`rpp_last_error_message`]. Positions cross the boundary as decimal strings
//! because they routinely exceed 64 bits. Bit buffers hold one bit per byte,
//! row-major for arrays.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigUint;
use rpp_core::arr2d::Arr2D;
use rpp_core::bitmat::BinaryMatrix;
use rpp_core::oracle::min_window_distance_1d;
use rpp_core::seq1d::Seq1D;
use rpp_core::Error;

/// Result codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RppStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParam = 2,
    Infeasible = 3,
    OutOfRange = 4,
    Dimension = 5,
    DecodeFailure = 6,
    Ambiguous = 7,
    Parse = 8,
    BufferTooSmall = 9,
    Internal = 10,
}

/// A one-dimensional robust positioning sequence.
pub struct RppSeq1D {
    inner: Seq1D,
}

/// A two-dimensional robust positioning array.
pub struct RppArray2D {
    inner: Arr2D,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Fail(RppStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidParam(_) => RppStatus::InvalidParam,
            Error::Infeasible(_) => RppStatus::Infeasible,
            Error::OutOfRange(_) => RppStatus::OutOfRange,
            Error::Dimension(_) => RppStatus::Dimension,
            Error::DecodeFailure(_) => RppStatus::DecodeFailure,
            Error::Ambiguous(_) => RppStatus::Ambiguous,
            Error::Parse(_) => RppStatus::Parse,
            _ => RppStatus::Internal,
        };
        Fail(code, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(RppStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> RppStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            RppStatus::Ok
        }
        Ok(Err(Fail(code, msg))) => {
            set_error(&msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            RppStatus::Internal
        }
    }
}

unsafe fn big_arg(s: *const c_char, what: &str) -> Result<BigUint, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    let text = CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail(RppStatus::Parse, format!("{what} is not UTF-8")))?;
    BigUint::parse_bytes(text.trim().as_bytes(), 10)
        .ok_or_else(|| Fail(RppStatus::Parse, format!("{what} is not a decimal integer: {text:?}")))
}

/// Writes `s` NUL-terminated into `buf`.
unsafe fn write_str(s: &str, buf: *mut c_char, cap: usize) -> Result<(), Fail> {
    if buf.is_null() {
        return Err(null("output buffer"));
    }
    if s.len() + 1 > cap {
        return Err(Fail(RppStatus::BufferTooSmall, format!("need {} bytes, have {cap}", s.len() + 1)));
    }
    ptr::copy_nonoverlapping(s.as_ptr(), buf as *mut u8, s.len());
    *buf.add(s.len()) = 0;
    Ok(())
}

unsafe fn bits_in<'a>(bits: *const u8, len: usize) -> Result<&'a [u8], Fail> {
    if bits.is_null() {
        return Err(null("bits"));
    }
    let s = std::slice::from_raw_parts(bits, len);
    if s.iter().any(|&b| b > 1) {
        return Err(Fail(RppStatus::InvalidParam, "bits must be 0 or 1".into()));
    }
    Ok(s)
}

unsafe fn bits_out(src: &[u8], out: *mut u8, cap: usize) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output bits"));
    }
    if src.len() > cap {
        return Err(Fail(RppStatus::BufferTooSmall, format!("need {} bytes, have {cap}", src.len())));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), out, src.len());
    Ok(())
}

/// Message describing the last failure on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn rpp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds the sequence for (d, m, nR).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn rpp_seq1d_new(d: usize, m: usize, n_r: usize, out: *mut *mut RppSeq1D) -> RppStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = Seq1D::new(d, m, n_r)?;
        *out = Box::into_raw(Box::new(RppSeq1D { inner }));
        Ok(())
    })
}

/// # Safety
/// `h` must come from [`rpp_seq1d_new`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn rpp_seq1d_free(h: *mut RppSeq1D) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Window length n, or 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rpp_seq1d_window_len(h: *const RppSeq1D) -> usize {
    h.as_ref().map_or(0, |h| h.inner.n())
}

/// Number of window positions as a decimal string.
///
/// # Safety
/// `h` must be a live handle; `buf` must hold `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn rpp_seq1d_num_positions(h: *const RppSeq1D, buf: *mut c_char, cap: usize) -> RppStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        write_str(&h.inner.num_positions().to_string(), buf, cap)
    })
}

/// Writes the n bits of the window starting at decimal position `pos`.
///
/// # Safety
/// `h` must be a live handle, `pos` a NUL-terminated string and `out` hold `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn rpp_seq1d_window_at(
    h: *const RppSeq1D,
    pos: *const c_char,
    out: *mut u8,
    cap: usize,
) -> RppStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        let w = h.inner.window_at(&big_arg(pos, "pos")?)?;
        bits_out(&w, out, cap)
    })
}

/// Locates a possibly corrupted window of `len` bits. The position is written
/// as a decimal string to `pos_buf`, the number of corrected errors to `errors`.
///
/// # Safety
/// `bits` must hold `len` bytes, `pos_buf` `cap` bytes; `errors` may be null.
#[no_mangle]
pub unsafe extern "C" fn rpp_seq1d_locate(
    h: *const RppSeq1D,
    bits: *const u8,
    len: usize,
    pos_buf: *mut c_char,
    cap: usize,
    errors: *mut usize,
) -> RppStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        let r = h.inner.locate(bits_in(bits, len)?)?;
        write_str(&r.position.to_string(), pos_buf, cap)?;
        if let Some(e) = errors.as_mut() {
            *e = r.errors;
        }
        Ok(())
    })
}

/// Builds the array for (d, m, n1, n2).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn rpp_array2d_new(
    d: usize,
    m: usize,
    n1: usize,
    n2: usize,
    out: *mut *mut RppArray2D,
) -> RppStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = Arr2D::new(d, m, n1, n2)?;
        *out = Box::into_raw(Box::new(RppArray2D { inner }));
        Ok(())
    })
}

/// # Safety
/// `h` must come from [`rpp_array2d_new`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn rpp_array2d_free(h: *mut RppArray2D) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Window shape n1 x n2.
///
/// # Safety
/// `h` must be a live handle; `n1` and `n2` valid writable pointers.
#[no_mangle]
pub unsafe extern "C" fn rpp_array2d_window_shape(h: *const RppArray2D, n1: *mut usize, n2: *mut usize) -> RppStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        let p = h.inner.params();
        *n1.as_mut().ok_or_else(|| null("n1"))? = p.n1;
        *n2.as_mut().ok_or_else(|| null("n2"))? = p.n2;
        Ok(())
    })
}

/// Writes the n1*n2 window with top-left corner (row, col), row-major.
///
/// # Safety
/// `h` must be a live handle, `row`/`col` NUL-terminated strings and `out` hold `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn rpp_array2d_window_at(
    h: *const RppArray2D,
    row: *const c_char,
    col: *const c_char,
    out: *mut u8,
    cap: usize,
) -> RppStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        let w = h.inner.window_at(&big_arg(row, "row")?, &big_arg(col, "col")?)?;
        bits_out(&w.to_row_major(), out, cap)
    })
}

/// Locates a possibly corrupted n1*n2 window given row-major.
///
/// # Safety
/// `bits` must hold n1*n2 bytes, each buffer `cap` bytes; `errors` may be null.
#[no_mangle]
pub unsafe extern "C" fn rpp_array2d_locate(
    h: *const RppArray2D,
    bits: *const u8,
    row_buf: *mut c_char,
    col_buf: *mut c_char,
    cap: usize,
    errors: *mut usize,
) -> RppStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        let p = h.inner.params();
        let w = BinaryMatrix::from_row_major(p.n1, p.n2, bits_in(bits, p.n1 * p.n2)?)?;
        let r = h.inner.locate(&w)?;
        write_str(&r.row.to_string(), row_buf, cap)?;
        write_str(&r.col.to_string(), col_buf, cap)?;
        if let Some(e) = errors.as_mut() {
            *e = r.errors;
        }
        Ok(())
    })
}

/// Minimum Hamming distance between distinct length-n windows of a bit string.
/// Writes `SIZE_MAX` when there are fewer than two windows.
///
/// # Safety
/// `bits` must hold `len` bytes and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn rpp_min_window_distance(
    bits: *const u8,
    len: usize,
    n: usize,
    cyclic: bool,
    out: *mut usize,
) -> RppStatus {
    guard(|| {
        let s = bits_in(bits, len)?;
        if n == 0 || n > len {
            return Err(Fail(RppStatus::InvalidParam, format!("window length {n} not in 1..={len}")));
        }
        let r = min_window_distance_1d(s, n, cyclic);
        *out.as_mut().ok_or_else(|| null("out"))? = r.min_distance.unwrap_or(usize::MAX);
        Ok(())
    })
}
