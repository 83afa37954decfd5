//! C interface to the bjorth library.
//!
//! Conventions: every fallible call returns a [`BjStatus`] and writes its
//! results through out-pointers only on `BJ_STATUS_OK`. A failing call stores
//! a message retrievable with [`bj_last_error_message`]; the message stays
//! valid until the next failing call on the same thread. [`BjSpace`] handles
//! own their space and are released with [`bj_space_free`]; strings returned
//! through `char **` are released with [`bj_string_free`]. Panics never cross
//! the boundary: they are caught and reported as `BJ_STATUS_INTERNAL_ERROR`.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use bjorth::{
    interval_equality_check, is_orthogonal, reconstruct_norm, theorem_suite, CompanionStatus,
    ErrorClass, LinePencil, LinearOperator, NormSpec, SamplerConfig, Vector,
};

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BjStatus {
    Ok = 0,
    NullPointer = 1,
    /// Ill-formed input: unparseable JSON, nonfinite numbers, invalid shapes.
    InvalidInput = 2,
    DimensionMismatch = 3,
    /// Legal data outside the operation's domain, such as reconstructing at
    /// a point of the orthogonality interval.
    PreconditionViolation = 4,
    InternalError = 5,
}

/// Outcome tag of a companion-function evaluation.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BjCompanionKind {
    /// The companion value exists; the `f_alpha` output is meaningful.
    Value = 0,
    /// The point lies in the orthogonality interval, where no finite
    /// coefficient is needed.
    OrthogonalToY = 1,
    /// The norm has a kink at this point; no value is defined.
    NotDifferentiable = 2,
}

/// Opaque handle to a normed space.
pub struct BjSpace {
    inner: NormSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: String) {
    let stored = CString::new(message)
        .unwrap_or_else(|_| CString::new("error message contained a NUL byte").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = stored);
}

fn null_pointer() -> BjStatus {
    set_error("null pointer argument".to_string());
    BjStatus::NullPointer
}

fn lib_status(e: &bjorth::Error) -> BjStatus {
    set_error(e.to_string());
    match e.class() {
        ErrorClass::Malformed => BjStatus::InvalidInput,
        ErrorClass::DimensionMismatch => BjStatus::DimensionMismatch,
        ErrorClass::Precondition => BjStatus::PreconditionViolation,
        ErrorClass::Internal => BjStatus::InternalError,
    }
}

fn guarded(body: impl FnOnce() -> BjStatus) -> BjStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic".to_string());
            BjStatus::InternalError
        }
    }
}

/// Reads a borrowed vector argument. `Err` already carries the status.
unsafe fn vector_arg(ptr: *const f64, len: usize) -> Result<Vector, BjStatus> {
    if ptr.is_null() {
        return Err(null_pointer());
    }
    let coords = unsafe { std::slice::from_raw_parts(ptr, len) };
    Vector::new(coords.to_vec()).map_err(|e| lib_status(&e))
}

unsafe fn space_arg<'a>(ptr: *const BjSpace) -> Result<&'a NormSpec, BjStatus> {
    if ptr.is_null() {
        return Err(null_pointer());
    }
    Ok(unsafe { &(*ptr).inner })
}

unsafe fn text_arg<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, BjStatus> {
    if ptr.is_null() {
        return Err(null_pointer());
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|_| {
        set_error(format!("{what} is not valid UTF-8"));
        BjStatus::InvalidInput
    })
}

/// Parses a JSON space description (`{"dim": n, "norm": {...}}`) into a
/// fresh handle, owned by the caller.
///
/// # Safety
/// `json` must point to a NUL-terminated string and `out` to writable
/// storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn bj_space_from_json(
    json: *const c_char,
    out: *mut *mut BjSpace,
) -> BjStatus {
    guarded(|| {
        if out.is_null() {
            return null_pointer();
        }
        let text = match unsafe { text_arg(json, "space JSON") } {
            Ok(t) => t,
            Err(status) => return status,
        };
        match serde_json::from_str::<NormSpec>(text) {
            Ok(space) => {
                unsafe { *out = Box::into_raw(Box::new(BjSpace { inner: space })) };
                BjStatus::Ok
            }
            Err(e) => {
                set_error(format!("malformed space: {e}"));
                BjStatus::InvalidInput
            }
        }
    })
}

/// Writes the dimension of the space.
///
/// # Safety
/// `space` must be a live handle from [`bj_space_from_json`]; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn bj_space_dim(space: *const BjSpace, out: *mut usize) -> BjStatus {
    guarded(|| {
        if out.is_null() {
            return null_pointer();
        }
        match unsafe { space_arg(space) } {
            Ok(spec) => {
                unsafe { *out = spec.dim() };
                BjStatus::Ok
            }
            Err(status) => status,
        }
    })
}

/// Releases a space handle. Passing NULL is a no-op.
///
/// # Safety
/// `space` must be a handle from [`bj_space_from_json`] that has not been
/// freed, or NULL.
#[no_mangle]
pub unsafe extern "C" fn bj_space_free(space: *mut BjSpace) {
    if !space.is_null() {
        drop(unsafe { Box::from_raw(space) });
    }
}

/// Writes the norm of the vector `coords[0..len]`.
///
/// # Safety
/// `space` must be a live handle; `coords` must point to `len` doubles;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bj_norm(
    space: *const BjSpace,
    coords: *const f64,
    len: usize,
    out: *mut f64,
) -> BjStatus {
    guarded(|| {
        if out.is_null() {
            return null_pointer();
        }
        let result = (|| {
            let spec = unsafe { space_arg(space) }?;
            let x = unsafe { vector_arg(coords, len) }?;
            spec.norm(&x).map_err(|e| lib_status(&e))
        })();
        match result {
            Ok(value) => {
                unsafe { *out = value };
                BjStatus::Ok
            }
            Err(status) => status,
        }
    })
}

/// Writes whether `u` is Birkhoff-James orthogonal to `v`, that is whether
/// every multiple of `v` added to `u` keeps the norm at least as large.
/// `u` must be nonzero; `v` may be anything.
///
/// # Safety
/// `space` must be a live handle; `u` and `v` must point to `u_len` and
/// `v_len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bj_is_orthogonal(
    space: *const BjSpace,
    u: *const f64,
    u_len: usize,
    v: *const f64,
    v_len: usize,
    out: *mut bool,
) -> BjStatus {
    guarded(|| {
        if out.is_null() {
            return null_pointer();
        }
        let result = (|| {
            let spec = unsafe { space_arg(space) }?;
            let u = unsafe { vector_arg(u, u_len) }?;
            let v = unsafe { vector_arg(v, v_len) }?;
            is_orthogonal(spec, &u, &v).map_err(|e| lib_status(&e))
        })();
        match result {
            Ok(value) => {
                unsafe { *out = value };
                BjStatus::Ok
            }
            Err(status) => status,
        }
    })
}

/// Computes the closed interval of coefficients `a` with `x + a*y`
/// orthogonal to `y`, writing its endpoints and the norm value on it.
/// `x` and `y` must be linearly independent.
///
/// # Safety
/// `space` must be a live handle; `x` and `y` must point to `x_len` and
/// `y_len` doubles; the three out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn bj_ortho_interval(
    space: *const BjSpace,
    x: *const f64,
    x_len: usize,
    y: *const f64,
    y_len: usize,
    out_lower: *mut f64,
    out_upper: *mut f64,
    out_min_value: *mut f64,
) -> BjStatus {
    guarded(|| {
        if out_lower.is_null() || out_upper.is_null() || out_min_value.is_null() {
            return null_pointer();
        }
        let result = (|| {
            let spec = unsafe { space_arg(space) }?;
            let x = unsafe { vector_arg(x, x_len) }?;
            let y = unsafe { vector_arg(y, y_len) }?;
            let pencil = LinePencil::new(spec.clone(), x, y).map_err(|e| lib_status(&e))?;
            pencil.interval().map_err(|e| lib_status(&e))
        })();
        match result {
            Ok(interval) => {
                unsafe {
                    *out_lower = interval.lo;
                    *out_upper = interval.hi;
                    *out_min_value = interval.min_value;
                }
                BjStatus::Ok
            }
            Err(status) => status,
        }
    })
}

/// Evaluates the companion function of the pencil `x + a*y` at `alpha`.
/// `out_kind` receives the outcome tag; `out_f_alpha` receives the value
/// when the tag is `BJ_COMPANION_KIND_VALUE` and NaN otherwise.
///
/// # Safety
/// `space` must be a live handle; `x` and `y` must point to `x_len` and
/// `y_len` doubles; both out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn bj_companion(
    space: *const BjSpace,
    x: *const f64,
    x_len: usize,
    y: *const f64,
    y_len: usize,
    alpha: f64,
    out_kind: *mut BjCompanionKind,
    out_f_alpha: *mut f64,
) -> BjStatus {
    guarded(|| {
        if out_kind.is_null() || out_f_alpha.is_null() {
            return null_pointer();
        }
        let result = (|| {
            let spec = unsafe { space_arg(space) }?;
            let x = unsafe { vector_arg(x, x_len) }?;
            let y = unsafe { vector_arg(y, y_len) }?;
            let pencil = LinePencil::new(spec.clone(), x, y).map_err(|e| lib_status(&e))?;
            pencil.companion_at(alpha).map_err(|e| lib_status(&e))
        })();
        match result {
            Ok(sample) => {
                let (kind, value) = match sample.status {
                    CompanionStatus::Value { f_alpha } => (BjCompanionKind::Value, f_alpha),
                    CompanionStatus::OrthogonalToY => (BjCompanionKind::OrthogonalToY, f64::NAN),
                    CompanionStatus::NotDifferentiable => {
                        (BjCompanionKind::NotDifferentiable, f64::NAN)
                    }
                };
                unsafe {
                    *out_kind = kind;
                    *out_f_alpha = value;
                }
                BjStatus::Ok
            }
            Err(status) => status,
        }
    })
}

/// Rebuilds the norm of `x + alpha*y` from the companion function by the
/// exponentiated integral, writing the rebuilt value, the directly computed
/// value, and their relative difference. `alpha` must lie outside the
/// orthogonality interval.
///
/// # Safety
/// `space` must be a live handle; `x` and `y` must point to `x_len` and
/// `y_len` doubles; the three out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn bj_reconstruct(
    space: *const BjSpace,
    x: *const f64,
    x_len: usize,
    y: *const f64,
    y_len: usize,
    alpha: f64,
    out_reconstructed: *mut f64,
    out_direct: *mut f64,
    out_rel_error: *mut f64,
) -> BjStatus {
    guarded(|| {
        if out_reconstructed.is_null() || out_direct.is_null() || out_rel_error.is_null() {
            return null_pointer();
        }
        let result = (|| {
            let spec = unsafe { space_arg(space) }?;
            let x = unsafe { vector_arg(x, x_len) }?;
            let y = unsafe { vector_arg(y, y_len) }?;
            let pencil = LinePencil::new(spec.clone(), x, y).map_err(|e| lib_status(&e))?;
            reconstruct_norm(&pencil, alpha).map_err(|e| lib_status(&e))
        })();
        match result {
            Ok(r) => {
                unsafe {
                    *out_reconstructed = r.reconstructed;
                    *out_direct = r.direct;
                    *out_rel_error = r.rel_error;
                }
                BjStatus::Ok
            }
            Err(status) => status,
        }
    })
}

/// Runs the operator classification on a JSON matrix (`{"matrix": [[...]]}`):
/// orthogonality preservation, the scaled-isometry test, and, for invertible
/// nonzero operators, the interval-equality comparison. Writes a freshly
/// allocated JSON report to `out_json`; release it with [`bj_string_free`].
///
/// # Safety
/// `space` must be a live handle; `operator_json` must be NUL-terminated;
/// `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bj_theorem_suite_json(
    space: *const BjSpace,
    operator_json: *const c_char,
    seed: u64,
    num_pairs: u32,
    out_json: *mut *mut c_char,
) -> BjStatus {
    guarded(|| {
        if out_json.is_null() {
            return null_pointer();
        }
        let result = (|| {
            let spec = unsafe { space_arg(space) }?;
            let text = unsafe { text_arg(operator_json, "operator JSON") }?;
            let op: LinearOperator = serde_json::from_str(text).map_err(|e| {
                set_error(format!("malformed operator: {e}"));
                BjStatus::InvalidInput
            })?;
            let cfg = SamplerConfig {
                seed,
                num_pairs,
                ..SamplerConfig::default()
            };
            let verdict = theorem_suite(spec, &op, &cfg).map_err(|e| lib_status(&e))?;
            let interval_equality = if op.is_invertible() && !op.is_zero() {
                Some(interval_equality_check(spec, &op, &cfg).map_err(|e| lib_status(&e))?)
            } else {
                None
            };
            let report = serde_json::json!({
                "verdict": verdict,
                "interval_equality": interval_equality,
            });
            serde_json::to_string_pretty(&report).map_err(|e| {
                set_error(format!("report serialization: {e}"));
                BjStatus::InternalError
            })
        })();
        match result {
            Ok(json) => match CString::new(json) {
                Ok(c) => {
                    unsafe { *out_json = c.into_raw() };
                    BjStatus::Ok
                }
                Err(_) => {
                    set_error("report contained a NUL byte".to_string());
                    BjStatus::InternalError
                }
            },
            Err(status) => status,
        }
    })
}

/// Releases a string returned through a `char **` output. Passing NULL is a
/// no-op.
///
/// # Safety
/// `s` must be a string returned by this library that has not been freed,
/// or NULL.
#[no_mangle]
pub unsafe extern "C" fn bj_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// The message of the last failing call on this thread, or an empty string.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bj_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}
