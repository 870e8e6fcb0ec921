use std::f64::consts::PI;
use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use inner_fourier_ffi::*;

fn last_error() -> String {
    let p = if_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn delta(theta1: f64, k: usize) -> *mut IfFourier {
    let mut fc = ptr::null_mut();
    assert_eq!(
        unsafe { if_delta_coefficients(theta1, 0, k, &mut fc) },
        IfStatus::Ok
    );
    fc
}

#[test]
fn fourier_roundtrip_through_handles() {
    unsafe {
        let (alpha, beta) = ([1.0, 0.5], [-0.25, 2.0]);
        let mut fc = ptr::null_mut();
        assert_eq!(
            if_fourier_new(3.0, alpha.as_ptr(), beta.as_ptr(), 2, &mut fc),
            IfStatus::Ok
        );
        assert_eq!(if_fourier_order(fc), 2);

        let mut tc = ptr::null_mut();
        assert_eq!(if_to_taylor(fc, &mut tc), IfStatus::Ok);
        let (mut re, mut im) = ([0.0; 3], [0.0; 3]);
        assert_eq!(
            if_taylor_get(tc, re.as_mut_ptr(), im.as_mut_ptr(), 3),
            IfStatus::Ok
        );
        assert_eq!(re, [1.5, 1.0, 0.5]);
        assert_eq!(im, [0.0, 0.25, -2.0]);
        assert_eq!(
            if_taylor_get(tc, re.as_mut_ptr(), im.as_mut_ptr(), 2),
            IfStatus::BufferTooSmall
        );

        let mut back = ptr::null_mut();
        assert_eq!(if_from_taylor(tc, &mut back), IfStatus::Ok);
        let (mut a0, mut a, mut b) = (0.0, [0.0; 2], [0.0; 2]);
        assert_eq!(
            if_fourier_get(back, &mut a0, a.as_mut_ptr(), b.as_mut_ptr(), 2),
            IfStatus::Ok
        );
        assert_eq!((a0, a, b), (3.0, alpha, beta));

        if_fourier_free(fc);
        if_fourier_free(back);
        if_taylor_free(tc);
    }
}

#[test]
fn complex_mean_and_null_pointers_are_reported() {
    unsafe {
        let (re, im) = ([1.0, 0.0], [0.5, 0.0]);
        let mut tc = ptr::null_mut();
        assert_eq!(
            if_taylor_new(re.as_ptr(), im.as_ptr(), 2, &mut tc),
            IfStatus::Ok
        );
        let mut fc = ptr::null_mut();
        assert_eq!(if_from_taylor(tc, &mut fc), IfStatus::NonRealMean);
        assert!(fc.is_null());
        assert!(!last_error().is_empty());
        if_taylor_free(tc);

        assert_eq!(
            if_fourier_new(0.0, ptr::null(), ptr::null(), 3, &mut fc),
            IfStatus::NullPointer
        );
        assert!(last_error().contains("alpha"));
        assert_eq!(if_to_taylor(ptr::null(), &mut tc), IfStatus::NullPointer);
        assert_eq!(if_fourier_order(ptr::null()), 0);
        if_fourier_free(ptr::null_mut());
    }
}

#[test]
fn catalog_entries_and_unknown_ids() {
    unsafe {
        let mut fc = ptr::null_mut();
        let id = c"square";
        assert_eq!(
            if_fourier_from_catalog(
                id.as_ptr(),
                5,
                0,
                true,
                0,
                f64::NAN,
                f64::NAN,
                f64::NAN,
                0,
                &mut fc
            ),
            IfStatus::Ok
        );
        let (mut a0, mut a, mut b) = (0.0, [0.0; 5], [0.0; 5]);
        if_fourier_get(fc, &mut a0, a.as_mut_ptr(), b.as_mut_ptr(), 5);
        assert_eq!(b[0], 4.0 / PI);
        assert_eq!(b[1], 0.0);
        if_fourier_free(fc);

        let id = c"poisson";
        assert_eq!(
            if_fourier_from_catalog(
                id.as_ptr(),
                3,
                64,
                false,
                0,
                f64::NAN,
                0.5,
                f64::NAN,
                0,
                &mut fc
            ),
            IfStatus::Ok
        );
        if_fourier_get(fc, &mut a0, a.as_mut_ptr(), b.as_mut_ptr(), 5);
        assert!((a[1] - 0.5).abs() < 1e-12);
        if_fourier_free(fc);

        let id = c"bogus";
        let status = if_fourier_from_catalog(
            id.as_ptr(),
            3,
            64,
            false,
            0,
            f64::NAN,
            f64::NAN,
            f64::NAN,
            0,
            &mut fc,
        );
        assert_eq!(status, IfStatus::Parse);
        assert!(last_error().contains("bogus"));
    }
}

#[test]
fn regulated_delta_is_the_poisson_kernel() {
    unsafe {
        let fc = delta(0.3, 4000);
        let (mut u, mut v) = (0.0, 0.0);
        assert_eq!(if_regulated_sum(fc, 1.0, 0.9, &mut u, &mut v), IfStatus::Ok);
        assert!((u - if_poisson_kernel(1.0, 0.3, 0.9)).abs() < 1e-12);
        assert_eq!(
            if_regulated_sum(fc, 1.0, 1.0, &mut u, &mut v),
            IfStatus::Domain
        );
        if_fourier_free(fc);
    }
}

#[test]
fn rho_limit_recovers_a_smooth_function() {
    unsafe {
        let (alpha, beta) = ([1.0], [0.0]);
        let mut fc = ptr::null_mut();
        if_fourier_new(0.0, alpha.as_ptr(), beta.as_ptr(), 1, &mut fc);
        let (mut value, mut converged) = (0.0, false);
        assert_eq!(
            if_rho_limit(fc, 0.0, 1, 30, 1e-6, &mut value, &mut converged),
            IfStatus::Ok
        );
        assert!((value - 1.0).abs() < 1e-8 && converged);
        assert_eq!(
            if_rho_limit(fc, 0.0, 5, 2, 1e-6, &mut value, &mut converged),
            IfStatus::Precondition
        );
        if_fourier_free(fc);
    }
}

#[test]
fn inner_functions_kernels_and_products() {
    unsafe {
        let (re, im) = ([0.0, 0.0, 1.0], [0.0, 0.0, 0.0]);
        let mut tc = ptr::null_mut();
        if_taylor_new(re.as_ptr(), im.as_ptr(), 3, &mut tc);
        let mut w = ptr::null_mut();
        assert_eq!(if_inner_from_taylor(tc, &mut w), IfStatus::Ok);
        let (mut a, mut b) = (0.0, 0.0);
        assert_eq!(if_inner_eval(w, 0.0, 0.5, &mut a, &mut b), IfStatus::Ok);
        assert_eq!((a, b), (-0.25, 0.0));

        let mut ps = IfPartialSum::default();
        assert_eq!(
            if_contour_partial_sum(w, 0.3, 0.0, 3, 0.8, 4096, &mut ps),
            IfStatus::Ok
        );
        assert!((ps.contour_re - 0.09).abs() < 1e-12 && ps.discrepancy < 1e-10);

        assert_eq!(
            if_inner_product_disk(w, w, 0.5, 256, &mut a, &mut b),
            IfStatus::Ok
        );
        assert!((a - 0.0625).abs() < 1e-15 && b.abs() < 1e-15);
        assert_eq!(
            if_inner_product_disk(w, w, 0.5, 8, &mut a, &mut b),
            IfStatus::Precondition
        );

        let mut d = ptr::null_mut();
        assert_eq!(if_inner_delta(0.0, &mut d), IfStatus::Ok);
        assert_eq!(if_inner_eval(d, 1.0, 0.0, &mut a, &mut b), IfStatus::Pole);
        assert_eq!(if_inner_delta(4.0, &mut d), IfStatus::Precondition);

        if_inner_free(w);
        if_inner_free(d);
        if_taylor_free(tc);
    }
}

#[test]
fn classification_and_gram() {
    unsafe {
        let grow: Vec<f64> = (0..=1024).map(|k| 1.1f64.powi(k)).collect();
        let mut r = IfClassification::default();
        assert_eq!(
            if_classify(grow.as_ptr(), grow.len(), 64, 1024, 0.0, &mut r),
            IfStatus::Ok
        );
        assert!(!r.bounded);
        assert!((r.fitted_rate - 1.1f64.ln()).abs() < 1e-9);
        let poly: Vec<f64> = (0..=1024).map(|k| (k as f64).powi(3)).collect();
        assert_eq!(
            if_classify(poly.as_ptr(), poly.len(), 0, 0, 0.0, &mut r),
            IfStatus::Ok
        );
        assert!(r.bounded && (r.window_lo, r.window_hi) == (256, 1024));

        let (mut diag, mut off) = (1.0, 1.0);
        assert_eq!(
            if_fourier_gram_errors(16, 66, &mut diag, &mut off),
            IfStatus::Ok
        );
        assert!(diag < 1e-12 && off < 1e-12);
    }
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(if_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

/// Compiles a C program against the generated header and static library.
#[test]
fn header_compiles_and_links_from_c() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libinner_fourier_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!(
            "skipping: no C compiler or static library at {}",
            lib.display()
        );
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"
#include <math.h>
#include <stdio.h>
#include "inner_fourier.h"

int main(void) {
    IfFourier *fc = NULL;
    if (if_delta_coefficients(0.0, 0, 8, &fc) != IF_STATUS_OK) return 10;
    double a0, a[8], b[8];
    if (if_fourier_get(fc, &a0, a, b, 8) != IF_STATUS_OK) return 11;
    if (fabs(a[7] - 1.0 / M_PI) > 1e-15) return 12;
    double u, v;
    if (if_regulated_sum(fc, 0.0, 2.0, &u, &v) != IF_STATUS_DOMAIN) return 13;
    if (if_last_error() == NULL) return 14;
    if_fourier_free(fc);
    printf("ok %s\n", if_version());
    return 0;
}
"#,
    )
    .unwrap();
    let bin = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
