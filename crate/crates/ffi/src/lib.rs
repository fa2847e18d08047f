//! C interface to `rangekit`.
//!
//! Every function returns an [`RkStatus`]; results come back through out
//! pointers. Handles are opaque and owned by the caller until passed to the
//! matching `*_free`. Positions and ranks are 1-based. On failure the
//! message is available from [`rk_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rangekit::mode_dynamic::DynamicMode;
use rangekit::mode_static::StaticModeIndex;
use rangekit::selection::{FixedRankSelector, OnlineRankSelector, RankFunction};
use rangekit::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    OutOfRange = 3,
    Format = 4,
    BufferTooSmall = 5,
    Logic = 6,
    Panic = 7,
}

/// Rank function of a fixed-rank selector.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RkRankKind {
    /// `ceil(s/2)`
    Median = 0,
    Min = 1,
    Max = 2,
    /// `min(k, s)`
    Const = 3,
}

pub struct RkStaticMode(StaticModeIndex);
pub struct RkFixedSelect(FixedRankSelector);
pub struct RkOnlineSelect(OnlineRankSelector);
pub struct RkDynamicMode(DynamicMode);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> RkStatus {
    match e {
        Error::InvalidParameter(_) | Error::LengthMismatch { .. } => RkStatus::InvalidParameter,
        Error::RangeOutOfBounds { .. } | Error::IndexOutOfBounds { .. } | Error::RankOutOfRange { .. } => {
            RkStatus::OutOfRange
        }
        Error::Format(_) => RkStatus::Format,
        Error::Logic(_) => RkStatus::Logic,
    }
}

struct Failure(RkStatus, String);

type Outcome = Result<(), Failure>;

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(RkStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, recording any error or panic.
fn guard(f: impl FnOnce() -> Outcome) -> RkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RkStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            RkStatus::Panic
        }
    }
}

unsafe fn slice<'a, T>(data: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

unsafe fn handle<'a, T>(h: *const T) -> Result<&'a T, Failure> {
    h.as_ref().ok_or_else(|| null("handle"))
}

unsafe fn handle_mut<'a, T>(h: *mut T) -> Result<&'a mut T, Failure> {
    h.as_mut().ok_or_else(|| null("handle"))
}

unsafe fn put<T>(out: *mut T, v: T) -> Outcome {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_handle<T>(out: *mut *mut T, v: T) -> Outcome {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(Box::into_raw(Box::new(v)));
    Ok(())
}

/// Copies `bytes` into `buf` if it fits; always reports the needed length.
unsafe fn copy_out(bytes: &[u8], buf: *mut u8, cap: usize, out_len: *mut usize) -> Outcome {
    put(out_len, bytes.len())?;
    if cap < bytes.len() {
        return Err(Failure(
            RkStatus::BufferTooSmall,
            format!("need {} bytes, buffer holds {cap}", bytes.len()),
        ));
    }
    if !bytes.is_empty() {
        if buf.is_null() {
            return Err(null("buffer"));
        }
        ptr::copy_nonoverlapping(bytes.as_ptr(), buf, bytes.len());
    }
    Ok(())
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `cap`) and returns its full length including the NUL.
///
/// # Safety
/// `buf` must be null or valid for `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn rk_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && cap > 0 {
            let n = msg.len().min(cap - 1);
            ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        msg.len() + 1
    })
}

// Static approximate range mode.

/// # Safety
/// `colors` must be valid for `n` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_static_build(
    colors: *const u64,
    n: usize,
    epsilon: f64,
    out: *mut *mut RkStaticMode,
) -> RkStatus {
    guard(|| {
        let seq = slice(colors, n, "colors")?;
        put_handle(out, RkStaticMode(StaticModeIndex::build(seq, epsilon)?))
    })
}

/// Position of an approximate mode of `[a, b]`.
///
/// # Safety
/// `h` must come from this library; `out_pos` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_static_query(
    h: *const RkStaticMode,
    a: usize,
    b: usize,
    out_pos: *mut usize,
) -> RkStatus {
    guard(|| put(out_pos, handle(h)?.0.query(a, b)?))
}

/// # Safety
/// `h` must come from this library; `out_bits` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_static_space_bits(h: *const RkStaticMode, out_bits: *mut usize) -> RkStatus {
    guard(|| put(out_bits, handle(h)?.0.space().total_bits))
}

/// Serializes into `buf`. With a short buffer, returns
/// `RK_STATUS_BUFFER_TOO_SMALL` and still sets `out_len`.
///
/// # Safety
/// `buf` must be valid for `cap` bytes; `out_len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_static_serialize(
    h: *const RkStaticMode,
    buf: *mut u8,
    cap: usize,
    out_len: *mut usize,
) -> RkStatus {
    guard(|| copy_out(&handle(h)?.0.to_bytes(), buf, cap, out_len))
}

/// # Safety
/// `bytes` must be valid for `len` bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_static_deserialize(
    bytes: *const u8,
    len: usize,
    out: *mut *mut RkStaticMode,
) -> RkStatus {
    guard(|| {
        let b = slice(bytes, len, "bytes")?;
        put_handle(out, RkStaticMode(StaticModeIndex::from_bytes(b)?))
    })
}

/// # Safety
/// `h` must be null or come from this library, and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rk_static_free(h: *mut RkStaticMode) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

// Fixed-rank selection.

/// `k` is used only with `RK_RANK_KIND_CONST`.
///
/// # Safety
/// `colors` must be valid for `n` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_fixed_build(
    colors: *const u64,
    n: usize,
    alpha: f64,
    kind: RkRankKind,
    k: usize,
    out: *mut *mut RkFixedSelect,
) -> RkStatus {
    guard(|| {
        let seq = slice(colors, n, "colors")?;
        let f = match kind {
            RkRankKind::Median => RankFunction::Median,
            RkRankKind::Min => RankFunction::Min,
            RkRankKind::Max => RankFunction::Max,
            RkRankKind::Const if k >= 1 => RankFunction::Const(k),
            RkRankKind::Const => return Err(Failure(RkStatus::InvalidParameter, "constant rank must be >= 1".into())),
        };
        put_handle(out, RkFixedSelect(FixedRankSelector::build(seq, alpha, f)?))
    })
}

/// # Safety
/// `h` must come from this library; `out_pos` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_fixed_query(
    h: *const RkFixedSelect,
    a: usize,
    b: usize,
    out_pos: *mut usize,
) -> RkStatus {
    guard(|| put(out_pos, handle(h)?.0.query(a, b)?))
}

/// # Safety
/// `h` must come from this library; `out_bits` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_fixed_space_bits(h: *const RkFixedSelect, out_bits: *mut usize) -> RkStatus {
    guard(|| put(out_bits, handle(h)?.0.space().total()))
}

/// # Safety
/// As [`rk_static_serialize`].
#[no_mangle]
pub unsafe extern "C" fn rk_fixed_serialize(
    h: *const RkFixedSelect,
    buf: *mut u8,
    cap: usize,
    out_len: *mut usize,
) -> RkStatus {
    guard(|| copy_out(&handle(h)?.0.to_bytes(), buf, cap, out_len))
}

/// # Safety
/// As [`rk_static_deserialize`].
#[no_mangle]
pub unsafe extern "C" fn rk_fixed_deserialize(
    bytes: *const u8,
    len: usize,
    out: *mut *mut RkFixedSelect,
) -> RkStatus {
    guard(|| {
        let b = slice(bytes, len, "bytes")?;
        put_handle(out, RkFixedSelect(FixedRankSelector::from_bytes(b)?))
    })
}

/// # Safety
/// As [`rk_static_free`].
#[no_mangle]
pub unsafe extern "C" fn rk_fixed_free(h: *mut RkFixedSelect) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

// Online-rank selection.

/// # Safety
/// `colors` must be valid for `n` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_online_build(
    colors: *const u64,
    n: usize,
    alpha: f64,
    out: *mut *mut RkOnlineSelect,
) -> RkStatus {
    guard(|| {
        let seq = slice(colors, n, "colors")?;
        put_handle(out, RkOnlineSelect(OnlineRankSelector::build(seq, alpha)?))
    })
}

/// Position of an approximate rank-`k` element of `[a, b]`.
///
/// # Safety
/// `h` must come from this library; `out_pos` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_online_query(
    h: *const RkOnlineSelect,
    a: usize,
    b: usize,
    k: usize,
    out_pos: *mut usize,
) -> RkStatus {
    guard(|| put(out_pos, handle(h)?.0.query(a, b, k)?))
}

/// # Safety
/// `h` must come from this library; `out_bits` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_online_space_bits(h: *const RkOnlineSelect, out_bits: *mut usize) -> RkStatus {
    guard(|| put(out_bits, handle(h)?.0.space().total()))
}

/// # Safety
/// As [`rk_static_serialize`].
#[no_mangle]
pub unsafe extern "C" fn rk_online_serialize(
    h: *const RkOnlineSelect,
    buf: *mut u8,
    cap: usize,
    out_len: *mut usize,
) -> RkStatus {
    guard(|| copy_out(&handle(h)?.0.to_bytes(), buf, cap, out_len))
}

/// # Safety
/// As [`rk_static_deserialize`].
#[no_mangle]
pub unsafe extern "C" fn rk_online_deserialize(
    bytes: *const u8,
    len: usize,
    out: *mut *mut RkOnlineSelect,
) -> RkStatus {
    guard(|| {
        let b = slice(bytes, len, "bytes")?;
        put_handle(out, RkOnlineSelect(OnlineRankSelector::from_bytes(b)?))
    })
}

/// # Safety
/// As [`rk_static_free`].
#[no_mangle]
pub unsafe extern "C" fn rk_online_free(h: *mut RkOnlineSelect) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

// Dynamic approximate range mode.

/// Empty structure; `n_hint` only sizes tables.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_dynamic_new(epsilon: f64, n_hint: usize, out: *mut *mut RkDynamicMode) -> RkStatus {
    guard(|| put_handle(out, RkDynamicMode(DynamicMode::new(epsilon, n_hint)?)))
}

/// Inserts `color` so that it lands at position `pos`.
///
/// # Safety
/// `h` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn rk_dynamic_insert(h: *mut RkDynamicMode, pos: usize, color: u64) -> RkStatus {
    guard(|| Ok(handle_mut(h)?.0.insert(pos, color)?))
}

/// Removes position `pos`; `out_color` may be null.
///
/// # Safety
/// `h` must come from this library; `out_color` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn rk_dynamic_delete(h: *mut RkDynamicMode, pos: usize, out_color: *mut u64) -> RkStatus {
    guard(|| {
        let c = handle_mut(h)?.0.delete(pos)?;
        if !out_color.is_null() {
            out_color.write(c);
        }
        Ok(())
    })
}

/// Position and color of an approximate mode of `[a, b]`.
///
/// # Safety
/// `h` must come from this library; both outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_dynamic_query(
    h: *mut RkDynamicMode,
    a: usize,
    b: usize,
    out_pos: *mut usize,
    out_color: *mut u64,
) -> RkStatus {
    guard(|| {
        if out_pos.is_null() || out_color.is_null() {
            return Err(null("output pointer"));
        }
        let ans = handle_mut(h)?.0.query(a, b)?;
        put(out_pos, ans.position)?;
        put(out_color, ans.color)
    })
}

/// # Safety
/// `h` must come from this library; `out_len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_dynamic_len(h: *const RkDynamicMode, out_len: *mut usize) -> RkStatus {
    guard(|| put(out_len, handle(h)?.0.len()))
}

/// # Safety
/// As [`rk_static_free`].
#[no_mangle]
pub unsafe extern "C" fn rk_dynamic_free(h: *mut RkDynamicMode) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}
