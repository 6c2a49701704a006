//! Exercises the C ABI through the exported extern "C" functions, raw
//! pointers and all, the way a foreign binding would.

use std::ffi::{c_char, CString};
use std::ptr;

use weierfield_ffi::*;

fn cosine_json() -> CString {
    CString::new(
        serde_json::json!({
            "d": 1,
            "terms": [
                {"k": [1], "re": 0.5, "im": 0.0},
                {"k": [-1], "re": 0.5, "im": 0.0}
            ]
        })
        .to_string(),
    )
    .unwrap()
}

fn last_error() -> String {
    let mut buf = vec![0u8; 256];
    let len = unsafe { wf_last_error_message(buf.as_mut_ptr() as *mut c_char, buf.len()) };
    buf.truncate(len.min(buf.len() - 1));
    String::from_utf8_lossy(&buf).into_owned()
}

#[test]
fn version_is_nul_terminated() {
    let v = wf_version();
    assert!(!v.is_null());
    let s = unsafe { std::ffi::CStr::from_ptr(v) }.to_str().unwrap();
    assert_eq!(s, env!("CARGO_PKG_VERSION"));
}

#[test]
fn trig_round_trip_and_eval() {
    let json = cosine_json();
    let mut trig: *mut wf_trig = ptr::null_mut();
    let status = unsafe { wf_trig_from_json(json.as_ptr(), &mut trig) };
    assert_eq!(status, WfStatus::WfOk);
    assert_eq!(unsafe { wf_trig_dim(trig) }, 1);

    let mut value = 0.0f64;
    let x = [0.0f64];
    let status = unsafe { wf_trig_eval(trig, x.as_ptr(), 1, &mut value) };
    assert_eq!(status, WfStatus::WfOk);
    assert!((value - 1.0).abs() < 1e-14);

    // Dimension mismatch surfaces as an invalid argument with a message.
    let xy = [0.0f64, 0.0];
    let status = unsafe { wf_trig_eval(trig, xy.as_ptr(), 2, &mut value) };
    assert_eq!(status, WfStatus::WfInvalidArgument);
    assert!(last_error().contains("dimension"));

    unsafe { wf_trig_free(trig) };
}

#[test]
fn parse_errors_report_status_and_message() {
    let bad = CString::new("{not json").unwrap();
    let mut trig: *mut wf_trig = ptr::null_mut();
    let status = unsafe { wf_trig_from_json(bad.as_ptr(), &mut trig) };
    assert_eq!(status, WfStatus::WfParseError);
    assert!(last_error().contains("parse"));

    let status = unsafe { wf_trig_from_json(ptr::null(), &mut trig) };
    assert_eq!(status, WfStatus::WfNullPointer);
}

#[test]
fn field_jet_is_harmonic_through_the_abi() {
    let json = cosine_json();
    let mut trig: *mut wf_trig = ptr::null_mut();
    assert_eq!(
        unsafe { wf_trig_from_json(json.as_ptr(), &mut trig) },
        WfStatus::WfOk
    );
    let mut field: *mut wf_field = ptr::null_mut();
    assert_eq!(
        unsafe { wf_field_new(trig, 2.0, 1e-12, &mut field) },
        WfStatus::WfOk
    );
    unsafe { wf_trig_free(trig) };
    assert_eq!(unsafe { wf_field_dim(field) }, 1);

    // f(0) = 2 for the classical series.
    let x = [0.0f64];
    let mut boundary = 0.0f64;
    assert_eq!(
        unsafe { wf_field_eval_boundary(field, x.as_ptr(), 1, &mut boundary) },
        WfStatus::WfOk
    );
    assert!((boundary - 2.0).abs() < 1e-11);

    let x = [0.37f64];
    let mut value = 0.0f64;
    let mut gradient = [0.0f64; 2];
    let mut hessian = [0.0f64; 3]; // (h11, h12, h22)
    let status = unsafe {
        wf_field_jet(
            field,
            x.as_ptr(),
            1,
            0.05,
            &mut value,
            gradient.as_mut_ptr(),
            hessian.as_mut_ptr(),
        )
    };
    assert_eq!(status, WfStatus::WfOk);
    let trace = hessian[0] + hessian[2];
    let scale = (hessian[0].powi(2) + 2.0 * hessian[1].powi(2) + hessian[2].powi(2)).sqrt();
    assert!(trace.abs() <= 1e-9 * (1.0 + scale));

    // Heights below the evaluation floor are rejected.
    let status = unsafe {
        wf_field_jet(field, x.as_ptr(), 1, 0.0, &mut value, ptr::null_mut(), ptr::null_mut())
    };
    assert_eq!(status, WfStatus::WfInvalidArgument);

    // Bad construction parameters.
    let mut trig2: *mut wf_trig = ptr::null_mut();
    assert_eq!(
        unsafe { wf_trig_from_json(json.as_ptr(), &mut trig2) },
        WfStatus::WfOk
    );
    let mut bad_field: *mut wf_field = ptr::null_mut();
    assert_eq!(
        unsafe { wf_field_new(trig2, 0.5, 1e-12, &mut bad_field) },
        WfStatus::WfInvalidArgument
    );
    assert!(last_error().contains("b must exceed 1"));
    unsafe { wf_trig_free(trig2) };
    unsafe { wf_field_free(field) };
}

#[test]
fn dimension_bounds_through_the_abi() {
    let mut bound = 0.0f64;
    let mut valid = false;
    let status = unsafe { wf_hungerford_bound(0.25, 0.5, 1, &mut bound, &mut valid) };
    assert_eq!(status, WfStatus::WfOk);
    assert!(valid);
    assert_eq!(bound, 0.5);

    let status = unsafe { wf_hungerford_bound(1.5, 0.5, 1, &mut bound, &mut valid) };
    assert_eq!(status, WfStatus::WfInvalidArgument);

    let mut m = 0.0f64;
    let status = unsafe {
        wf_makarov_bound(2, 1.0, 1.0, 1.0, 10.0, std::f64::consts::PI / 3.0, 2, &mut m)
    };
    assert_eq!(status, WfStatus::WfOk);
    assert_eq!(m, 2.0);
}

#[test]
fn free_null_is_noop() {
    unsafe {
        wf_trig_free(ptr::null_mut());
        wf_field_free(ptr::null_mut());
    }
}

#[test]
fn generated_header_exists_and_declares_the_surface() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("include")
        .join("weierfield.h");
    let text = std::fs::read_to_string(&header).expect("header generated at build time");
    for needle in [
        "wf_status",
        "wf_trig_from_json",
        "wf_field_jet",
        "wf_hungerford_bound",
        "wf_last_error_message",
        "WF_OK",
    ] {
        assert!(text.contains(needle), "header missing {needle}");
    }
}
