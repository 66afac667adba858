use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use qhankel_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(qh_last_error_message()) }.to_string_lossy().into_owned()
}

fn build(f: impl FnOnce(*mut *mut QhMatrix) -> QhStatus) -> *mut QhMatrix {
    let mut m = ptr::null_mut();
    assert_eq!(f(&mut m), QhStatus::Ok, "{}", last_error());
    assert!(!m.is_null());
    m
}

#[test]
fn build_read_and_free() {
    let m = build(|out| qh_build_gcal(0.5, 3, out));
    unsafe {
        assert_eq!(qh_matrix_order(m), 3);
        let mut v = 0.0;
        assert_eq!(qh_matrix_get(m, 1, 1, &mut v), QhStatus::Ok);
        assert!((v - 2.0 / 7.0).abs() < 1e-15);
        assert_eq!(qh_matrix_get(m, 3, 0, &mut v), QhStatus::IndexOutOfRange);
        let mut buf = [0.0; 9];
        assert_eq!(qh_matrix_copy(m, buf.as_mut_ptr(), 8), QhStatus::BufferTooSmall);
        assert_eq!(qh_matrix_copy(m, buf.as_mut_ptr(), 9), QhStatus::Ok);
        assert_eq!(buf[0], 2.0);
        assert_eq!(buf[1], buf[3]);
        let mut ev = [0.0; 3];
        assert_eq!(qh_matrix_eigenvalues(m, ev.as_mut_ptr(), 3), QhStatus::Ok);
        assert!(ev[0] <= ev[1] && ev[1] <= ev[2]);
        qh_matrix_free(m);
        qh_matrix_free(ptr::null_mut());
        assert_eq!(qh_matrix_order(ptr::null()), 0);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut m = ptr::null_mut();
    assert_eq!(qh_build_asc(1.5, 0.2, 0.5, 4, &mut m), QhStatus::Domain);
    assert!(m.is_null());
    assert!(last_error().contains("domain"), "{}", last_error());
    assert_eq!(qh_build_gcal(0.5, 4, ptr::null_mut()), QhStatus::NullPointer);
    let mut v = 0.0;
    unsafe {
        assert_eq!(qh_matrix_get(ptr::null(), 0, 0, &mut v), QhStatus::NullPointer);
        assert_eq!(qh_multiplier_h(0.0, 0.3, 0.2, 0.5, &mut v), QhStatus::Domain);
    }
    let name = unsafe { CStr::from_ptr(qh_status_name(QhStatus::DimensionMismatch)) };
    assert_eq!(name.to_str().unwrap(), "dimension-mismatch");
}

#[test]
fn commutator_through_handles() {
    let h = build(|out| qh_build_asc(0.3, 0.2, 0.5, 30, out));
    let j = build(|out| qh_build_asc_jacobi(0.3, 0.2, 0.5, 30, out));
    let small = build(|out| qh_build_asc(0.3, 0.2, 0.5, 10, out));
    unsafe {
        let mut c = f64::NAN;
        assert_eq!(qh_commutator_interior_max(j, h, 1, &mut c), QhStatus::Ok);
        assert!(c < 1e-12, "{c}");
        assert_eq!(qh_commutator_interior_max(j, small, 1, &mut c), QhStatus::DimensionMismatch);
        for m in [h, j, small] {
            qh_matrix_free(m);
        }
    }
}

#[test]
fn multipliers() {
    let (mut g, mut t) = (0.0, 0.0);
    unsafe {
        assert_eq!(qh_multiplier_tilde_h(1.2, 0.5, 0.5, &mut t), QhStatus::Ok);
        assert_eq!(qh_multiplier_g(1.2, 0.5f64.powf(1.0), 0.25, &mut g), QhStatus::Ok);
        let mut h = 0.0;
        assert_eq!(qh_multiplier_h(1.2, 0.3, 0.2, 0.5, &mut h), QhStatus::Ok);
        assert!(h > 0.0);
    }
    assert!((g - t).abs() < 1e-11);
}

/// Compiles `tests/c/smoke.c` against the generated header and the static
/// library when a C compiler is available.
#[test]
fn c_program_links_against_header() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include").join("qhankel.h");
    assert!(std::fs::read_to_string(&header).unwrap().contains("qh_matrix_eigenvalues"));
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    let lib = deps.parent().unwrap().join("libqhankel_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists() || Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: static library or C compiler unavailable");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new(&cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "domain 1\n");
}
