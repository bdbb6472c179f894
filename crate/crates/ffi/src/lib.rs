//! C ABI over `lpcodes`. Results live behind opaque handles that the caller
//! releases with the matching `*_free` function; every fallible call returns
//! an [`LpcStatus`] and leaves a message for [`lpc_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lpcodes::analysis::{analyze, CodeAnalysis};
use lpcodes::exact_ball::{mu, PowRadius};
use lpcodes::lattice::{LatticeBasis, MAX_DIM};
use lpcodes::search::{run_search, SearchQuery, SearchReport};
use lpcodes::Error;

#[repr(i32)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum LpcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    SingularMatrix = 3,
    UnsupportedDimension = 4,
    HypothesisViolated = 5,
    Overflow = 6,
    LimitExceeded = 7,
    OutOfRange = 8,
    Panic = 9,
}

/// Analysis of one lattice code.
pub struct LpcAnalysis {
    inner: CodeAnalysis,
}

/// Result of an exhaustive search.
pub struct LpcSearchReport {
    inner: SearchReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(e: Error) -> LpcStatus {
    let status = match e {
        Error::SingularMatrix => LpcStatus::SingularMatrix,
        Error::LimitExceeded { .. } => LpcStatus::LimitExceeded,
        Error::DimensionUnsupported { .. } => LpcStatus::UnsupportedDimension,
        Error::HypothesisViolated(_) => LpcStatus::HypothesisViolated,
        Error::Overflow(_) => LpcStatus::Overflow,
        Error::InvalidInput(_) => LpcStatus::InvalidInput,
    };
    set_error(e.to_string());
    status
}

fn guard(f: impl FnOnce() -> LpcStatus) -> LpcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            LpcStatus::Panic
        }
    }
}

fn into_c_string(s: String, out: *mut *mut c_char) -> LpcStatus {
    match CString::new(s) {
        Ok(c) => {
            // SAFETY: callers check `out` for null before getting here.
            unsafe { *out = c.into_raw() };
            LpcStatus::Ok
        }
        Err(_) => {
            set_error("string contains a NUL byte");
            LpcStatus::InvalidInput
        }
    }
}

/// Message of the most recent failure on this thread, or NULL. Free it with
/// [`lpc_string_free`].
#[no_mangle]
pub extern "C" fn lpc_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        Some(msg) => msg.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// # Safety
/// `s` must come from this library and not have been freed yet.
#[no_mangle]
pub unsafe extern "C" fn lpc_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: guaranteed by the caller.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Analyzes the lattice spanned by the `dim` rows of the row-major
/// `dim * dim` matrix `rows` under the ℓ_p metric.
///
/// # Safety
/// `rows` must point to `dim * dim` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lpc_analyze(
    rows: *const i64,
    dim: usize,
    p: u32,
    out: *mut *mut LpcAnalysis,
) -> LpcStatus {
    if rows.is_null() || out.is_null() {
        set_error("null pointer argument");
        return LpcStatus::NullPointer;
    }
    if dim == 0 || dim > MAX_DIM {
        return fail(Error::DimensionUnsupported { dim, supported: "1..=4" });
    }
    // SAFETY: the caller provides dim * dim values.
    let flat = unsafe { std::slice::from_raw_parts(rows, dim * dim) };
    guard(|| {
        let basis = match LatticeBasis::new(flat.chunks(dim).map(<[i64]>::to_vec).collect()) {
            Ok(b) => b,
            Err(e) => return fail(e),
        };
        match analyze(&basis, p) {
            Ok(a) => {
                // SAFETY: `out` is non-null and writable per the contract.
                unsafe { *out = Box::into_raw(Box::new(LpcAnalysis { inner: a })) };
                LpcStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `a` must come from this library and not have been freed yet.
#[no_mangle]
pub unsafe extern "C" fn lpc_analysis_free(a: *mut LpcAnalysis) {
    if !a.is_null() {
        // SAFETY: guaranteed by the caller.
        drop(unsafe { Box::from_raw(a) });
    }
}

/// Lattice dimension. Returns 0 for a NULL handle.
///
/// # Safety
/// `a` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lpc_analysis_dim(a: *const LpcAnalysis) -> usize {
    // SAFETY: guaranteed by the caller.
    unsafe { a.as_ref() }.map_or(0, |a| a.inner.dim)
}

/// Determinant, i.e. the code size. Returns 0 for a NULL handle.
///
/// # Safety
/// `a` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lpc_analysis_det(a: *const LpcAnalysis) -> u64 {
    // SAFETY: guaranteed by the caller.
    unsafe { a.as_ref() }.map_or(0, |a| a.inner.det)
}

/// Packing radius raised to the p-th power. Returns 0 for a NULL handle.
///
/// # Safety
/// `a` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lpc_analysis_packing_pow(a: *const LpcAnalysis) -> u64 {
    // SAFETY: guaranteed by the caller.
    unsafe { a.as_ref() }.map_or(0, |a| a.inner.packing_pow.get())
}

/// Covering radius raised to the p-th power. Returns 0 for a NULL handle.
///
/// # Safety
/// `a` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lpc_analysis_covering_pow(a: *const LpcAnalysis) -> u64 {
    // SAFETY: guaranteed by the caller.
    unsafe { a.as_ref() }.map_or(0, |a| a.inner.covering_pow.get())
}

/// Number of distances strictly between the two radii. Returns 0 for a NULL handle.
///
/// # Safety
/// `a` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lpc_analysis_imperfection(a: *const LpcAnalysis) -> u64 {
    // SAFETY: guaranteed by the caller.
    unsafe { a.as_ref() }.map_or(0, |a| a.inner.t)
}

/// Ball size at the packing radius. Returns 0 for a NULL handle.
///
/// # Safety
/// `a` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lpc_analysis_mu_packing(a: *const LpcAnalysis) -> u64 {
    // SAFETY: guaranteed by the caller.
    unsafe { a.as_ref() }.map_or(0, |a| a.inner.mu_r)
}

/// Ball size at the covering radius. Returns 0 for a NULL handle.
///
/// # Safety
/// `a` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lpc_analysis_mu_covering(a: *const LpcAnalysis) -> u64 {
    // SAFETY: guaranteed by the caller.
    unsafe { a.as_ref() }.map_or(0, |a| a.inner.mu_cover)
}

/// Packing radius of the real ℓ_p polyomino tiling. Returns 0.0 for a NULL handle.
///
/// # Safety
/// `a` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lpc_analysis_real_pack_radius(a: *const LpcAnalysis) -> f64 {
    // SAFETY: guaranteed by the caller.
    unsafe { a.as_ref() }.map_or(0.0, |a| a.inner.real_pack_radius)
}

/// Writes the HNF basis row-major into `rows_out`, which must hold `dim * dim` values.
///
/// # Safety
/// `a` must be a live handle; `rows_out` must be writable for `capacity` values.
#[no_mangle]
pub unsafe extern "C" fn lpc_analysis_basis(
    a: *const LpcAnalysis,
    rows_out: *mut i64,
    capacity: usize,
) -> LpcStatus {
    // SAFETY: guaranteed by the caller.
    let Some(a) = (unsafe { a.as_ref() }) else {
        set_error("null analysis handle");
        return LpcStatus::NullPointer;
    };
    write_rows(a.inner.basis.rows(), rows_out, capacity)
}

fn write_rows(rows: &[Vec<i64>], out: *mut i64, capacity: usize) -> LpcStatus {
    if out.is_null() {
        set_error("null output buffer");
        return LpcStatus::NullPointer;
    }
    let flat: Vec<i64> = rows.iter().flatten().copied().collect();
    if capacity < flat.len() {
        set_error(format!("buffer holds {capacity} values, {} needed", flat.len()));
        return LpcStatus::OutOfRange;
    }
    // SAFETY: `out` is writable for `capacity >= flat.len()` values.
    unsafe { ptr::copy_nonoverlapping(flat.as_ptr(), out, flat.len()) };
    LpcStatus::Ok
}

/// Full analysis as JSON; free the string with [`lpc_string_free`].
///
/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lpc_analysis_to_json(a: *const LpcAnalysis, out: *mut *mut c_char) -> LpcStatus {
    // SAFETY: guaranteed by the caller.
    let Some(a) = (unsafe { a.as_ref() }) else {
        set_error("null analysis handle");
        return LpcStatus::NullPointer;
    };
    if out.is_null() {
        set_error("null output pointer");
        return LpcStatus::NullPointer;
    }
    match serde_json::to_string(&a.inner) {
        Ok(s) => into_c_string(s, out),
        Err(e) => {
            set_error(e.to_string());
            LpcStatus::Panic
        }
    }
}

/// Number of integer points `x` with `Σ|x_i|^p <= s`, or 0 for invalid `dim`/`p`.
#[no_mangle]
pub extern "C" fn lpc_mu(dim: usize, p: u32, s: u64) -> u64 {
    if dim == 0 || dim > MAX_DIM || p == 0 {
        set_error("dimension must lie in 1..=4 and p must be positive");
        return 0;
    }
    mu(dim, p, PowRadius(s))
}

/// Searches volumes `volume_min..=volume_max` for codes with `t <= t_max`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lpc_search(
    dim: usize,
    p: u32,
    volume_min: u64,
    volume_max: u64,
    t_max: u64,
    dedupe: bool,
    out: *mut *mut LpcSearchReport,
) -> LpcStatus {
    if out.is_null() {
        set_error("null output pointer");
        return LpcStatus::NullPointer;
    }
    guard(|| {
        let q = SearchQuery { n: dim, p, volume_min, volume_max, t_max, dedupe };
        match run_search(&q) {
            Ok(r) => {
                // SAFETY: `out` is non-null and writable per the contract.
                unsafe { *out = Box::into_raw(Box::new(LpcSearchReport { inner: r })) };
                LpcStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `r` must come from this library and not have been freed yet.
#[no_mangle]
pub unsafe extern "C" fn lpc_search_free(r: *mut LpcSearchReport) {
    if !r.is_null() {
        // SAFETY: guaranteed by the caller.
        drop(unsafe { Box::from_raw(r) });
    }
}

/// # Safety
/// `r` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lpc_search_hit_count(r: *const LpcSearchReport) -> usize {
    // SAFETY: guaranteed by the caller.
    unsafe { r.as_ref() }.map_or(0, |r| r.inner.hits.len())
}

/// Copies the analysis of hit `index` into a new handle owned by the caller.
///
/// # Safety
/// `r` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lpc_search_hit(
    r: *const LpcSearchReport,
    index: usize,
    out: *mut *mut LpcAnalysis,
) -> LpcStatus {
    // SAFETY: guaranteed by the caller.
    let Some(r) = (unsafe { r.as_ref() }) else {
        set_error("null report handle");
        return LpcStatus::NullPointer;
    };
    if out.is_null() {
        set_error("null output pointer");
        return LpcStatus::NullPointer;
    }
    match r.inner.hits.get(index) {
        Some(hit) => {
            // SAFETY: `out` is non-null and writable per the contract.
            unsafe { *out = Box::into_raw(Box::new(LpcAnalysis { inner: hit.analysis.clone() })) };
            LpcStatus::Ok
        }
        None => {
            set_error(format!("hit {index} out of range ({} hits)", r.inner.hits.len()));
            LpcStatus::OutOfRange
        }
    }
}

/// Whole report as JSON; free the string with [`lpc_string_free`].
///
/// # Safety
/// `r` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lpc_search_to_json(r: *const LpcSearchReport, out: *mut *mut c_char) -> LpcStatus {
    // SAFETY: guaranteed by the caller.
    let Some(r) = (unsafe { r.as_ref() }) else {
        set_error("null report handle");
        return LpcStatus::NullPointer;
    };
    if out.is_null() {
        set_error("null output pointer");
        return LpcStatus::NullPointer;
    }
    match serde_json::to_string(&r.inner) {
        Ok(s) => into_c_string(s, out),
        Err(e) => {
            set_error(e.to_string());
            LpcStatus::Panic
        }
    }
}
