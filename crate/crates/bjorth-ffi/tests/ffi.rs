//! Exercises the C entry points in-process: handle lifecycle, numeric
//! results, status codes, and the error-message channel.

use std::ffi::{CStr, CString};
use std::ptr;

use bjorth_ffi::{
    bj_companion, bj_is_orthogonal, bj_last_error_message, bj_norm, bj_ortho_interval,
    bj_reconstruct, bj_space_dim, bj_space_free, bj_space_from_json, bj_string_free,
    bj_theorem_suite_json, BjCompanionKind, BjSpace, BjStatus,
};

const L2_2D: &str = r#"{"dim": 2, "norm": {"type": "lp", "p": 2.0}}"#;
const LINF_2D: &str = r#"{"dim": 2, "norm": {"type": "lp", "p": "inf"}}"#;
const L1_2D: &str = r#"{"dim": 2, "norm": {"type": "lp", "p": 1.0}}"#;

fn make_space(json: &str) -> *mut BjSpace {
    let c = CString::new(json).unwrap();
    let mut out: *mut BjSpace = ptr::null_mut();
    let status = unsafe { bj_space_from_json(c.as_ptr(), &mut out) };
    assert_eq!(status, BjStatus::Ok);
    assert!(!out.is_null());
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(bj_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn space_lifecycle_and_dimension() {
    let space = make_space(L2_2D);
    let mut dim = 0usize;
    assert_eq!(unsafe { bj_space_dim(space, &mut dim) }, BjStatus::Ok);
    assert_eq!(dim, 2);
    unsafe { bj_space_free(space) };
    unsafe { bj_space_free(ptr::null_mut()) };
}

#[test]
fn norm_of_a_euclidean_vector() {
    let space = make_space(L2_2D);
    let coords = [3.0, 4.0];
    let mut value = 0.0;
    let status = unsafe { bj_norm(space, coords.as_ptr(), coords.len(), &mut value) };
    assert_eq!(status, BjStatus::Ok);
    assert!((value - 5.0).abs() <= 1e-12, "{value}");
    unsafe { bj_space_free(space) };
}

#[test]
fn orthogonality_of_the_axes() {
    let space = make_space(L2_2D);
    let e1 = [1.0, 0.0];
    let e2 = [0.0, 1.0];
    let diag = [1.0, 1.0];
    let mut flag = false;
    let status = unsafe {
        bj_is_orthogonal(space, e1.as_ptr(), 2, e2.as_ptr(), 2, &mut flag)
    };
    assert_eq!(status, BjStatus::Ok);
    assert!(flag);
    let status = unsafe {
        bj_is_orthogonal(space, e1.as_ptr(), 2, diag.as_ptr(), 2, &mut flag)
    };
    assert_eq!(status, BjStatus::Ok);
    assert!(!flag);
    unsafe { bj_space_free(space) };
}

#[test]
fn interval_of_the_sup_norm_pencil() {
    let space = make_space(LINF_2D);
    let x = [1.0, 0.0];
    let y = [0.0, 1.0];
    let (mut lo, mut hi, mut min_value) = (0.0, 0.0, 0.0);
    let status = unsafe {
        bj_ortho_interval(
            space,
            x.as_ptr(),
            2,
            y.as_ptr(),
            2,
            &mut lo,
            &mut hi,
            &mut min_value,
        )
    };
    assert_eq!(status, BjStatus::Ok);
    assert!((lo + 1.0).abs() <= 1e-9, "{lo}");
    assert!((hi - 1.0).abs() <= 1e-9, "{hi}");
    assert!((min_value - 1.0).abs() <= 1e-9, "{min_value}");
    unsafe { bj_space_free(space) };
}

#[test]
fn companion_covers_all_three_outcomes() {
    let x = [1.0, 0.0];
    let y = [0.0, 1.0];
    let mut kind = BjCompanionKind::NotDifferentiable;
    let mut f_alpha = 0.0;

    let space = make_space(L2_2D);
    let status = unsafe {
        bj_companion(space, x.as_ptr(), 2, y.as_ptr(), 2, 2.0, &mut kind, &mut f_alpha)
    };
    assert_eq!(status, BjStatus::Ok);
    assert_eq!(kind, BjCompanionKind::Value);
    assert!((f_alpha - 0.5).abs() <= 1e-9, "{f_alpha}");
    unsafe { bj_space_free(space) };

    let space = make_space(LINF_2D);
    let status = unsafe {
        bj_companion(space, x.as_ptr(), 2, y.as_ptr(), 2, 0.5, &mut kind, &mut f_alpha)
    };
    assert_eq!(status, BjStatus::Ok);
    assert_eq!(kind, BjCompanionKind::OrthogonalToY);
    assert!(f_alpha.is_nan());
    unsafe { bj_space_free(space) };

    let space = make_space(L1_2D);
    let kinked = [1.0, 1.0];
    let status = unsafe {
        bj_companion(space, x.as_ptr(), 2, kinked.as_ptr(), 2, 0.0, &mut kind, &mut f_alpha)
    };
    assert_eq!(status, BjStatus::Ok);
    assert_eq!(kind, BjCompanionKind::NotDifferentiable);
    assert!(f_alpha.is_nan());
    unsafe { bj_space_free(space) };
}

#[test]
fn reconstruction_and_its_precondition() {
    let space = make_space(LINF_2D);
    let x = [1.0, 0.0];
    let y = [0.0, 1.0];
    let (mut rebuilt, mut direct, mut rel) = (0.0, 0.0, 0.0);
    let status = unsafe {
        bj_reconstruct(
            space,
            x.as_ptr(),
            2,
            y.as_ptr(),
            2,
            3.0,
            &mut rebuilt,
            &mut direct,
            &mut rel,
        )
    };
    assert_eq!(status, BjStatus::Ok);
    assert!((rebuilt - 3.0).abs() <= 1e-9 * 3.0, "{rebuilt}");
    assert_eq!(direct, 3.0);
    let status = unsafe {
        bj_reconstruct(
            space,
            x.as_ptr(),
            2,
            y.as_ptr(),
            2,
            0.25,
            &mut rebuilt,
            &mut direct,
            &mut rel,
        )
    };
    assert_eq!(status, BjStatus::PreconditionViolation);
    assert!(!last_error().is_empty());
    unsafe { bj_space_free(space) };
}

#[test]
fn theorem_suite_reports_a_rotation_as_preserving() {
    let space = make_space(L2_2D);
    let op = CString::new(r#"{"matrix": [[0.6, -0.8], [0.8, 0.6]]}"#).unwrap();
    let mut out: *mut std::os::raw::c_char = ptr::null_mut();
    let status = unsafe { bj_theorem_suite_json(space, op.as_ptr(), 7, 120, &mut out) };
    assert_eq!(status, BjStatus::Ok);
    assert!(!out.is_null());
    let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
    unsafe { bj_string_free(out) };
    unsafe { bj_space_free(space) };
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["verdict"]["preserves"]["outcome"], "preserves");
    assert_eq!(report["verdict"]["scaled_isometry"]["outcome"], "yes");
    assert_eq!(report["verdict"]["inconsistent"], false);
    assert!(report["interval_equality"]["pencils_tested"].as_u64().unwrap() > 0);
}

#[test]
fn status_codes_partition_the_failure_modes() {
    let mut flag = false;
    let mut out_space: *mut BjSpace = ptr::null_mut();

    let status = unsafe { bj_space_from_json(ptr::null(), &mut out_space) };
    assert_eq!(status, BjStatus::NullPointer);

    let garbage = CString::new("{not json").unwrap();
    let status = unsafe { bj_space_from_json(garbage.as_ptr(), &mut out_space) };
    assert_eq!(status, BjStatus::InvalidInput);
    assert!(last_error().contains("malformed space"), "{}", last_error());

    let bad_p = CString::new(r#"{"dim": 2, "norm": {"type": "lp", "p": 0.5}}"#).unwrap();
    let status = unsafe { bj_space_from_json(bad_p.as_ptr(), &mut out_space) };
    assert_eq!(status, BjStatus::InvalidInput);

    let space = make_space(L2_2D);
    let too_long = [1.0, 2.0, 3.0];
    let mut value = 0.0;
    let status = unsafe { bj_norm(space, too_long.as_ptr(), 3, &mut value) };
    assert_eq!(status, BjStatus::DimensionMismatch);

    let zero = [0.0, 0.0];
    let e2 = [0.0, 1.0];
    let status = unsafe {
        bj_is_orthogonal(space, zero.as_ptr(), 2, e2.as_ptr(), 2, &mut flag)
    };
    assert_eq!(status, BjStatus::PreconditionViolation);

    let status = unsafe { bj_norm(space, ptr::null(), 2, &mut value) };
    assert_eq!(status, BjStatus::NullPointer);
    let status = unsafe { bj_norm(space, e2.as_ptr(), 2, ptr::null_mut()) };
    assert_eq!(status, BjStatus::NullPointer);
    unsafe { bj_space_free(space) };
}
