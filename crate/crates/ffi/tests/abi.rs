use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use nicadil_ffi::*;

fn last_error() -> String {
    let p = nicadil_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn scalar_rep(a: f64) -> (*mut NicadilLattice, *mut NicadilRep) {
    let mut lattice = ptr::null_mut();
    let mut rep = ptr::null_mut();
    unsafe {
        assert_eq!(nicadil_lattice_integer_grid(1, &mut lattice), NicadilStatus::Ok);
        assert_eq!(nicadil_rep_new_direct(lattice, 1, [a, 0.0].as_ptr(), 1e-9, &mut rep), NicadilStatus::Ok);
    }
    (lattice, rep)
}

#[test]
fn version_is_crate_version() {
    let v = unsafe { CStr::from_ptr(nicadil_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn scalar_kernel_eigenvalue() {
    let (lattice, rep) = scalar_rep(0.5);
    let mut min = 0.0;
    unsafe {
        assert_eq!(nicadil_kernel_min_eigenvalue(rep, [0i64, 1].as_ptr(), 2, &mut min), NicadilStatus::Ok);
        nicadil_rep_free(rep);
        nicadil_lattice_free(lattice);
    }
    assert!((min - 0.5).abs() < 1e-12);
}

#[test]
fn norm_exceeded_sets_error() {
    let mut lattice = ptr::null_mut();
    let mut rep = ptr::null_mut();
    unsafe {
        nicadil_lattice_integer_grid(1, &mut lattice);
        let status = nicadil_rep_new_direct(lattice, 1, [1.2, 0.0].as_ptr(), 1e-9, &mut rep);
        assert_eq!(status, NicadilStatus::NormExceeded);
        assert!(rep.is_null());
        nicadil_lattice_free(lattice);
    }
    assert!(last_error().starts_with("NormExceeded"));
}

#[test]
fn null_arguments_are_reported() {
    let mut out = 0.0;
    let status = unsafe { nicadil_kernel_min_eigenvalue(ptr::null(), ptr::null(), 0, &mut out) };
    assert_eq!(status, NicadilStatus::NullPointer);
    assert!(last_error().contains("rep"));
}

#[test]
fn zero_contraction_dilation() {
    let (lattice, rep) = scalar_rep(0.0);
    let pts: Vec<i64> = (0..5).collect();
    let mut dil = ptr::null_mut();
    let (mut iso, mut reg) = (1.0, 1.0);
    unsafe {
        assert_eq!(nicadil_dilation_build(rep, pts.as_ptr(), 5, &mut dil), NicadilStatus::Ok);
        assert_eq!(nicadil_dilation_rank(dil), 5);
        assert_eq!(nicadil_dilation_verify_isometry(dil, [1i64].as_ptr(), &mut iso), NicadilStatus::Ok);
        assert_eq!(nicadil_dilation_verify_regularity(dil, [-2i64].as_ptr(), &mut reg), NicadilStatus::Ok);
        nicadil_dilation_free(dil);
        nicadil_rep_free(rep);
        nicadil_lattice_free(lattice);
    }
    assert!(iso < 1e-12);
    assert!(reg < 1e-12);
}

#[test]
fn nica_on_two_factors() {
    let factors = CString::new(r#"[{"kind":"cyclic"},{"kind":"cyclic"}]"#).unwrap();
    let mut lattice = ptr::null_mut();
    let mut rep = ptr::null_mut();
    let mut dil = ptr::null_mut();
    // diag(0.4, 0.4) and diag(0.3, -0.3) on C^2
    let data = [
        0.4, 0.0, 0.0, 0.0, 0.0, 0.0, 0.4, 0.0, //
        0.3, 0.0, 0.0, 0.0, 0.0, 0.0, -0.3, 0.0,
    ];
    let support = [0i64, 0, 1, 0, 0, 1, 1, 1];
    let (mut full, mut restricted) = (1.0, 1.0);
    unsafe {
        assert_eq!(nicadil_lattice_from_json(factors.as_ptr(), &mut lattice), NicadilStatus::Ok);
        assert_eq!(nicadil_lattice_total_generators(lattice), 2);
        assert_eq!(nicadil_rep_new_direct(lattice, 2, data.as_ptr(), 1e-9, &mut rep), NicadilStatus::Ok);
        assert_eq!(nicadil_rep_dim(rep), 2);
        assert_eq!(nicadil_dilation_build(rep, support.as_ptr(), 4, &mut dil), NicadilStatus::Ok);
        let status = nicadil_dilation_verify_nica(
            dil,
            [1i64, 0].as_ptr(),
            [0i64, 1].as_ptr(),
            [0i64, 1].as_ptr(),
            [1i64, 0].as_ptr(),
            &mut full,
            &mut restricted,
        );
        assert_eq!(status, NicadilStatus::Ok);
        let same_factor = nicadil_dilation_verify_nica(
            dil,
            [1i64, 0].as_ptr(),
            [2i64, 0].as_ptr(),
            [0i64, 0].as_ptr(),
            [0i64, 0].as_ptr(),
            &mut full,
            &mut restricted,
        );
        assert_eq!(same_factor, NicadilStatus::InvalidArgument);
        nicadil_dilation_free(dil);
        nicadil_rep_free(rep);
        nicadil_lattice_free(lattice);
    }
}

#[test]
fn bad_factor_json() {
    let factors = CString::new(r#"[{"kind":"cyclic","generators":["-1"]}]"#).unwrap();
    let mut lattice = ptr::null_mut();
    let status = unsafe { nicadil_lattice_from_json(factors.as_ptr(), &mut lattice) };
    assert_eq!(status, NicadilStatus::InvalidFactor);
    let garbage = CString::new("{").unwrap();
    assert_eq!(unsafe { nicadil_lattice_from_json(garbage.as_ptr(), &mut lattice) }, NicadilStatus::Parse);
}

#[test]
fn run_scenario_round_trip() {
    let text = CString::new(include_str!("../../core/scenarios/scalar_kernel.json")).unwrap();
    let mut report = ptr::null_mut();
    let mut code = -1;
    unsafe {
        assert_eq!(nicadil_run_scenario(text.as_ptr(), &mut report, &mut code), NicadilStatus::Ok);
        let json: serde_json::Value = serde_json::from_str(CStr::from_ptr(report).to_str().unwrap()).unwrap();
        nicadil_string_free(report);
        assert_eq!(json["verdict"], "pass");
        assert!((json["tasks"][0]["results"]["min_eigenvalue"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    }
    assert_eq!(code, 0);

    let bad = CString::new(r#"{"factors": 3}"#).unwrap();
    let status = unsafe { nicadil_run_scenario(bad.as_ptr(), &mut report, &mut code) };
    assert_eq!(status, NicadilStatus::Parse);
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/nicadil.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["nicadil_run_scenario", "nicadil_dilation_verify_nica", "NICADIL_STATUS_GRAM_NOT_PSD"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-x", "c", "-std=c99"])
        .arg(&header)
        .status()
    else {
        eprintln!("no C compiler; syntax check skipped");
        return;
    };
    assert!(status.success());
}
