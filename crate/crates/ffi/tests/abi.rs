use std::ffi::{CStr, CString};
use std::ptr;

use gls_ffi::*;

fn psi_power(beta: f64, gamma: f64) -> *mut GlsPsi {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { gls_psi_power(beta, gamma, &mut out) }, GlsStatus::Ok);
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(gls_last_error_message()) }.to_string_lossy().into_owned()
}

#[test]
fn power_psi_round_trip() {
    let psi = psi_power(1.0, 0.5);
    assert_eq!(unsafe { gls_psi_eval(psi, 4.0) }, 2.0);
    assert_eq!(unsafe { gls_psi_eval(psi, 0.5) }, f64::INFINITY);
    let (mut lo, mut hi, mut lc, mut uc) = (0.0, 0.0, false, true);
    assert_eq!(unsafe { gls_psi_domain(psi, &mut lo, &mut hi, &mut lc, &mut uc) }, GlsStatus::Ok);
    assert_eq!((lo, hi, lc, uc), (1.0, f64::INFINITY, true, false));
    unsafe { gls_psi_free(psi) };
}

#[test]
fn invalid_parameters_set_the_message() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { gls_psi_power(-1.0, 1.0, &mut out) }, GlsStatus::InvalidParameter);
    assert!(out.is_null());
    assert!(last_error().contains("beta"));
    let psi = psi_power(1.0, 1.0);
    assert!(last_error().is_empty());
    let mut t = 0.0;
    assert_eq!(unsafe { gls_tail_bound(psi, 2.0, 1.0, &mut t) }, GlsStatus::BelowValidity);
    unsafe { gls_psi_free(psi) };
}

#[test]
fn tail_and_conjugate() {
    let psi = psi_power(1.0, 0.5);
    let mut t = 0.0;
    assert_eq!(unsafe { gls_tail_bound(psi, 1.0, 2.0, &mut t) }, GlsStatus::Ok);
    let mut c = 0.0;
    assert_eq!(unsafe { gls_power_tail_closed_form(0.5, 1.0, 2.0, &mut c) }, GlsStatus::Ok);
    assert!((t - c).abs() < 1e-8);
    let (mut v, mut arg) = (0.0, 0.0);
    let lin = psi_power(1.0, 1.0);
    assert_eq!(unsafe { gls_fenchel_conjugate(lin, 2.0, &mut v, &mut arg) }, GlsStatus::Ok);
    assert!((v - std::f64::consts::E).abs() < 1e-8);
    unsafe {
        gls_psi_free(psi);
        gls_psi_free(lin);
    }
}

#[test]
fn moments_and_norms() {
    let text = CString::new("glsmoments v1\n1\t0.5\n2\t0.75\n3\t0.8\n").unwrap();
    let mut table = ptr::null_mut();
    assert_eq!(unsafe { gls_moments_parse(text.as_ptr(), &mut table) }, GlsStatus::Ok);
    let mut nat = ptr::null_mut();
    assert_eq!(unsafe { gls_psi_natural(table, &mut nat) }, GlsStatus::Ok);
    let mut n = 0.0;
    assert_eq!(unsafe { gls_norm(table, nat, &mut n) }, GlsStatus::Ok);
    assert!((n - 1.0).abs() < 1e-12);
    let mut deg = ptr::null_mut();
    assert_eq!(unsafe { gls_psi_degenerate(2.0, &mut deg) }, GlsStatus::Ok);
    assert_eq!(unsafe { gls_norm(table, deg, &mut n) }, GlsStatus::Ok);
    assert_eq!(n, 0.75);

    let bad = CString::new("glsmoments v1\n2\t1\n1\t1\n").unwrap();
    let mut t2 = ptr::null_mut();
    assert_ne!(unsafe { gls_moments_parse(bad.as_ptr(), &mut t2) }, GlsStatus::Ok);

    let ps = [1.0, 2.0];
    let ms = [1.0, 2.0];
    let mut t3 = ptr::null_mut();
    assert_eq!(unsafe { gls_moments_new(ps.as_ptr(), ms.as_ptr(), 2, &mut t3) }, GlsStatus::Ok);
    unsafe {
        gls_psi_free(nat);
        gls_psi_free(deg);
        gls_moments_free(table);
        gls_moments_free(t3);
    }
}

#[test]
fn lemmas_and_beckner() {
    let (mut v, mut a, mut b) = (0.0, 0.0, 0.0);
    assert_eq!(unsafe { gls_holder_split_min(2.0, 1.0, &mut v, &mut a, &mut b) }, GlsStatus::Ok);
    assert!((v - 6.75).abs() < 1e-12);
    assert_eq!(unsafe { gls_conjugate_split_min(1.0, 1.0, 2.0, &mut v, &mut a, &mut b) }, GlsStatus::Ok);
    assert_eq!((a, b), (4.0, 4.0));
    let (mut r, mut g) = (0.0, 0.0);
    assert_eq!(unsafe { gls_beckner_constant(1, 4.0 / 3.0, 4.0 / 3.0, &mut r, &mut g) }, GlsStatus::Ok);
    assert!((g - 0.877383).abs() < 1e-6);
    assert_eq!(unsafe { gls_beckner_constant(1, 3.0, 3.0, &mut r, &mut g) }, GlsStatus::ConstraintViolation);
}

#[test]
fn combinators() {
    let p1 = psi_power(1.0, 1.0);
    let mut k = ptr::null_mut();
    assert_eq!(unsafe { gls_combine_product(p1, p1, &mut k) }, GlsStatus::Ok);
    assert!((unsafe { gls_psi_eval(k, 1.0) } - 4.0).abs() < 1e-9);
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { gls_combine_tensor(p1, p1, &mut t) }, GlsStatus::Ok);
    assert_eq!(unsafe { gls_psi_eval(t, 3.0) }, 9.0);
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { gls_combine_convolution(p1, p1, 1, &mut c) }, GlsStatus::Ok);
    assert!(unsafe { gls_psi_eval(c, 2.0) } <= 2.0 + 1e-9);
    let (mut ic, mut relaxed) = (ptr::null_mut(), 0.0);
    assert_eq!(unsafe { gls_combine_infimal_convolution(p1, 1, 2, &mut ic, &mut relaxed) }, GlsStatus::Ok);
    assert_eq!(relaxed, 2.0);
    assert!((unsafe { gls_psi_eval(ic, 1.0) } - 2.0).abs() < 1e-12);
    let mut mx = ptr::null_mut();
    assert_eq!(unsafe { gls_combine_maximal(1.0, 2, 1.0, &mut mx) }, GlsStatus::Ok);
    assert!((unsafe { gls_psi_eval(mx, 1.0) } - 16.0).abs() < 1e-7);
    let mut hd = ptr::null_mut();
    assert_eq!(unsafe { gls_combine_hausdorff(1.0, 1, 1.0, &mut hd) }, GlsStatus::Ok);
    assert!((unsafe { gls_psi_eval(hd, 2.0) } - 8.0).abs() < 1e-9);
    let mut tp = ptr::null_mut();
    assert_eq!(unsafe { gls_combine_toeplitz(1.0, 1.0, &mut tp) }, GlsStatus::Ok);
    assert!((unsafe { gls_psi_eval(tp, 2.0) } - 16.0).abs() < 1e-12);
    assert!(!unsafe { gls_psi_is_finite_at(tp, 1.0) });
    for h in [p1, k, t, c, ic, mx, hd, tp] {
        unsafe { gls_psi_free(h) };
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/gls.h")).unwrap();
    for name in [
        "gls_psi_power",
        "gls_psi_natural",
        "gls_norm",
        "gls_tail_bound",
        "gls_beckner_constant",
        "gls_combine_infimal_convolution",
        "gls_last_error_message",
        "typedef struct GlsPsi GlsPsi",
    ] {
        assert!(header.contains(name), "{name} missing from gls.h");
    }
}

/// Compiles the C example against the static library when a C compiler is
/// on the path.
#[test]
fn c_program_links_against_static_library() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libgls_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let dir = env!("CARGO_MANIFEST_DIR");
    let tmp = tempdir();
    let bin = tmp.join("smoke");
    let status = std::process::Command::new(cc)
        .args([&format!("{dir}/examples/smoke.c"), "-I", &format!("{dir}/include"), "-o"])
        .arg(&bin)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl"])
        .status()
        .unwrap();
    assert!(status.success());
    let out = std::process::Command::new(&bin).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "0.4791");
}

fn which_cc() -> Result<&'static str, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if std::process::Command::new(cc).arg("--version").output().is_ok() {
            return Ok(cc);
        }
    }
    Err(())
}

fn tempdir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("gls-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
