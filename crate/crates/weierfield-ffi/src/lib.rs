//! C ABI for the weierfield library: opaque handles, status codes, and a
//! thread-local last-error message.
//!
//! The header `include/weierfield.h` is generated by cbindgen at build time.
//! All functions are safe to call from any thread; handles are immutable
//! after construction and may be shared across threads, but must be freed
//! exactly once with the matching `*_free` function.
#![allow(non_camel_case_types)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use weierfield::field::HarmonicField;
use weierfield::{Error, TrigPolynomial, WeierstrassField};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WfStatus {
    WfOk = 0,
    WfNullPointer = 1,
    WfInvalidArgument = 2,
    WfParseError = 3,
    WfNumericError = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|c| *c != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(e: &Error) -> WfStatus {
    match e {
        Error::Config(_) | Error::Json(_) => WfStatus::WfParseError,
        Error::InvalidParameter(_) => WfStatus::WfInvalidArgument,
        _ => WfStatus::WfNumericError,
    }
}

/// Opaque handle to a trigonometric polynomial base function.
pub struct wf_trig {
    inner: TrigPolynomial,
}

/// Opaque handle to a Weierstrass field with its harmonic extension.
pub struct wf_field {
    inner: WeierstrassField,
}

/// Returns the library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn wf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copies the current thread's last error message into `buf` (truncating if
/// needed) and returns the full message length in bytes, excluding the NUL.
///
/// # Safety
/// `buf` must point to at least `cap` writable bytes, or be NULL (then only
/// the length is returned).
#[no_mangle]
pub unsafe extern "C" fn wf_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let msg = slot.borrow();
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap);
            std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            // Always NUL-terminate.
            *buf.add(n - 1) = 0;
        }
        bytes.len() - 1
    })
}

/// Parses a base function from its JSON form
/// `{"d": int, "terms": [{"k": [int,...], "re": float, "im": float}, ...]}`.
/// On success writes a new handle to `out`; free with [`wf_trig_free`].
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wf_trig_from_json(
    json: *const c_char,
    out: *mut *mut wf_trig,
) -> WfStatus {
    if json.is_null() || out.is_null() {
        set_error("null pointer argument");
        return WfStatus::WfNullPointer;
    }
    let text = match CStr::from_ptr(json).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("json argument is not valid UTF-8");
            return WfStatus::WfParseError;
        }
    };
    let value: serde_json::Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => {
            set_error(&format!("json parse error: {e}"));
            return WfStatus::WfParseError;
        }
    };
    match TrigPolynomial::from_json(&value) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(wf_trig { inner }));
            WfStatus::WfOk
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Frees a handle returned by [`wf_trig_from_json`]. NULL is a no-op.
///
/// # Safety
/// `t` must be a pointer previously returned by this library and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn wf_trig_free(t: *mut wf_trig) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Boundary dimension d of the base function; 0 for a NULL handle.
///
/// # Safety
/// `t` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn wf_trig_dim(t: *const wf_trig) -> usize {
    if t.is_null() {
        return 0;
    }
    (*t).inner.dim()
}

/// Evaluates φ(x). `x` must have length `dim`.
///
/// # Safety
/// `t` must be a live handle; `x` must point to `dim` readable doubles;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wf_trig_eval(
    t: *const wf_trig,
    x: *const f64,
    dim: usize,
    out: *mut f64,
) -> WfStatus {
    if t.is_null() || x.is_null() || out.is_null() {
        set_error("null pointer argument");
        return WfStatus::WfNullPointer;
    }
    let trig = &(*t).inner;
    if dim != trig.dim() {
        set_error(&format!(
            "point has dimension {dim} but the base function has d = {}",
            trig.dim()
        ));
        return WfStatus::WfInvalidArgument;
    }
    let xs = std::slice::from_raw_parts(x, dim);
    *out = trig.eval(xs);
    WfStatus::WfOk
}

/// Builds a Weierstrass field over a base function; the base handle stays
/// owned by the caller. Free the result with [`wf_field_free`].
///
/// # Safety
/// `t` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wf_field_new(
    t: *const wf_trig,
    b: f64,
    tail_tol: f64,
    out: *mut *mut wf_field,
) -> WfStatus {
    if t.is_null() || out.is_null() {
        set_error("null pointer argument");
        return WfStatus::WfNullPointer;
    }
    match WeierstrassField::new((*t).inner.clone(), b, tail_tol) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(wf_field { inner }));
            WfStatus::WfOk
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Frees a handle returned by [`wf_field_new`]. NULL is a no-op.
///
/// # Safety
/// `f` must be a pointer previously returned by this library and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn wf_field_free(f: *mut wf_field) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Boundary dimension d of the field; 0 for a NULL handle.
///
/// # Safety
/// `f` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn wf_field_dim(f: *const wf_field) -> usize {
    if f.is_null() {
        return 0;
    }
    (*f).inner.dim()
}

/// Evaluates the boundary function f_{b,φ}(x). `x` must have length `dim`.
///
/// # Safety
/// `f` must be a live handle; `x` must point to `dim` readable doubles;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wf_field_eval_boundary(
    f: *const wf_field,
    x: *const f64,
    dim: usize,
    out: *mut f64,
) -> WfStatus {
    if f.is_null() || x.is_null() || out.is_null() {
        set_error("null pointer argument");
        return WfStatus::WfNullPointer;
    }
    let field = &(*f).inner;
    if dim != field.dim() {
        set_error(&format!(
            "point has dimension {dim} but the field has d = {}",
            field.dim()
        ));
        return WfStatus::WfInvalidArgument;
    }
    let xs = std::slice::from_raw_parts(x, dim);
    *out = field.eval(xs);
    WfStatus::WfOk
}

/// Evaluates the harmonic-extension jet at (x, y), y > 0.
///
/// Writes the value, the d+1 gradient components (vertical derivative last),
/// and the (d+1)(d+2)/2 upper-triangular Hessian entries in row order. Any
/// output pointer may be NULL to skip that part.
///
/// # Safety
/// `f` must be a live handle; `x` must point to `dim` readable doubles;
/// non-NULL outputs must have the stated capacities.
#[no_mangle]
pub unsafe extern "C" fn wf_field_jet(
    f: *const wf_field,
    x: *const f64,
    dim: usize,
    y: f64,
    out_value: *mut f64,
    out_gradient: *mut f64,
    out_hessian_upper: *mut f64,
) -> WfStatus {
    if f.is_null() || x.is_null() {
        set_error("null pointer argument");
        return WfStatus::WfNullPointer;
    }
    let field = &(*f).inner;
    let d = field.dim();
    if dim != d {
        set_error(&format!("point has dimension {dim} but the field has d = {d}"));
        return WfStatus::WfInvalidArgument;
    }
    let xs = std::slice::from_raw_parts(x, dim);
    match field.jet(xs, y) {
        Ok(jet) => {
            if !out_value.is_null() {
                *out_value = jet.value;
            }
            if !out_gradient.is_null() {
                std::ptr::copy_nonoverlapping(jet.gradient.as_ptr(), out_gradient, d + 1);
            }
            if !out_hessian_upper.is_null() {
                let upper = jet.hessian.upper_triangular();
                std::ptr::copy_nonoverlapping(upper.as_ptr(), out_hessian_upper, upper.len());
            }
            WfStatus::WfOk
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Hausdorff-dimension lower bound log(beta/alpha^d)/log(1/alpha) for nested
/// cube families. `out_valid` receives whether the strict parameter order
/// alpha < beta^(1/d) < 1 holds; the bound value is written regardless.
///
/// # Safety
/// `out_bound` and `out_valid` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn wf_hungerford_bound(
    alpha: f64,
    beta: f64,
    dim: usize,
    out_bound: *mut f64,
    out_valid: *mut bool,
) -> WfStatus {
    if out_bound.is_null() || out_valid.is_null() {
        set_error("null pointer argument");
        return WfStatus::WfNullPointer;
    }
    match weierfield::stopping::hungerford_bound(alpha, beta, dim) {
        Ok(b) => {
            *out_bound = b.bound;
            *out_valid = b.valid;
            WfStatus::WfOk
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Radius-driven dimension lower bound
/// d − c·bloch·log(1/beta) / (radius·cos(theta)·log(n)).
///
/// # Safety
/// `out_bound` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wf_makarov_bound(
    dim: usize,
    c_const: f64,
    bloch_norm: f64,
    beta: f64,
    radius: f64,
    theta: f64,
    n: u32,
    out_bound: *mut f64,
) -> WfStatus {
    if out_bound.is_null() {
        set_error("null pointer argument");
        return WfStatus::WfNullPointer;
    }
    match weierfield::stopping::makarov_bound(dim, c_const, bloch_norm, beta, radius, theta, n) {
        Ok(v) => {
            *out_bound = v;
            WfStatus::WfOk
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}
