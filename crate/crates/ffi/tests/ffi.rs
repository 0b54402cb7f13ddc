use std::ffi::{c_char, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use circle_cs_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0u8; 512];
    let n = unsafe { ccs_last_error_message(buf.as_mut_ptr().cast::<c_char>(), buf.len()) };
    buf.truncate(n.min(511));
    String::from_utf8(buf).unwrap()
}

#[test]
fn erf_and_errors() {
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(
        unsafe { ccs_erf(0.0, 1.0, &mut re, &mut im) },
        CcsStatus::Ok
    );
    assert_eq!((re, im), (0.0, 1.6504257587975429));
    assert_eq!(
        unsafe { ccs_erf(f64::NAN, 0.0, &mut re, &mut im) },
        CcsStatus::Domain
    );
    assert!(!last_error().is_empty());
    assert_eq!(
        unsafe { ccs_erf(0.0, 0.0, ptr::null_mut(), &mut im) },
        CcsStatus::NullPointer
    );
    assert!(last_error().contains("null"));
}

#[test]
fn error_message_query_and_truncation() {
    let (mut re, mut im) = (0.0, 0.0);
    unsafe { ccs_erf(0.0, 13.0, &mut re, &mut im) };
    let full = unsafe { ccs_last_error_message(ptr::null_mut(), 0) };
    let mut small = [1 as c_char; 4];
    assert_eq!(
        unsafe { ccs_last_error_message(small.as_mut_ptr(), 4) },
        full
    );
    assert_eq!(small[3], 0);
}

#[test]
fn coherent_eval_and_moments() {
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(
        unsafe { ccs_coherent_eval(0, 0.0, 0.0, &mut re, &mut im) },
        CcsStatus::Ok
    );
    assert_eq!(re, ccs_normalization_constant());
    let mut v = 0.0;
    assert_eq!(unsafe { ccs_expectation_q(2, 0.0, &mut v) }, CcsStatus::Ok);
    assert_eq!(v, 0.0);
    assert_eq!(unsafe { ccs_expectation_p2(1, 0.5, &mut v) }, CcsStatus::Ok);
    assert!((v - 1.500_091_7).abs() < 1e-7);
    assert_eq!(
        unsafe { ccs_momentum_dispersion(1, 0.5, &mut v) },
        CcsStatus::Ok
    );
    assert!((v - 0.500_091_7).abs() < 1e-7);
    assert_eq!(
        unsafe { ccs_expectation_q(0, f64::INFINITY, &mut v) },
        CcsStatus::Domain
    );
}

#[test]
fn overlaps_agree() {
    let (mut re, mut im, mut err) = (0.0, 0.0, 0.0);
    let (mut qre, mut qim) = (0.0, 0.0);
    assert_eq!(
        unsafe { ccs_overlap(1, -0.4, 3, 2.5, &mut re, &mut im, &mut err) },
        CcsStatus::Ok
    );
    assert_eq!(
        unsafe {
            ccs_overlap_quadrature(
                1,
                -0.4,
                3,
                2.5,
                1e-12,
                1e-12,
                &mut qre,
                &mut qim,
                ptr::null_mut(),
            )
        },
        CcsStatus::Ok
    );
    assert!((re - qre).hypot(im - qim) < 1e-12);
    assert_eq!(
        unsafe {
            ccs_overlap_quadrature(
                0,
                0.5,
                1,
                2.0,
                1e-300,
                1e-300,
                &mut qre,
                &mut qim,
                ptr::null_mut(),
            )
        },
        CcsStatus::Tolerance
    );
    assert_eq!(
        unsafe {
            ccs_overlap_quadrature(
                0,
                0.5,
                1,
                2.0,
                -1.0,
                1e-12,
                &mut qre,
                &mut qim,
                ptr::null_mut(),
            )
        },
        CcsStatus::Domain
    );
}

#[test]
fn wavefunction_round_trip() {
    let mut psi = ptr::null_mut();
    assert_eq!(
        unsafe { ccs_sample_state(2, 1.0, 64, &mut psi) },
        CcsStatus::Ok
    );
    assert_eq!(unsafe { ccs_wavefunction_len(psi) }, 64);
    let (mut re, mut im) = (vec![0.0; 64], vec![0.0; 64]);
    assert_eq!(
        unsafe { ccs_wavefunction_amplitudes(psi, re.as_mut_ptr(), im.as_mut_ptr(), 64) },
        CcsStatus::Ok
    );
    assert_eq!(
        unsafe { ccs_wavefunction_amplitudes(psi, re.as_mut_ptr(), im.as_mut_ptr(), 63) },
        CcsStatus::Domain
    );
    let mut copy = ptr::null_mut();
    assert_eq!(
        unsafe { ccs_wavefunction_from_amplitudes(re.as_ptr(), im.as_ptr(), 64, &mut copy) },
        CcsStatus::Ok
    );
    assert_eq!(unsafe { ccs_wavefunction_len(copy) }, 64);
    assert_eq!(
        unsafe { ccs_sample_state(0, 0.0, 8, &mut copy) },
        CcsStatus::Domain
    );
    unsafe {
        ccs_wavefunction_free(copy);
        ccs_wavefunction_free(psi);
        ccs_wavefunction_free(ptr::null_mut());
        assert_eq!(ccs_wavefunction_len(ptr::null()), 0);
    }
}

#[test]
fn resolution_report() {
    let name = CString::new("plane_wave_5").unwrap();
    let mut eta = ptr::null_mut();
    assert_eq!(
        unsafe { ccs_test_vector(name.as_ptr(), 1024, &mut eta) },
        CcsStatus::Ok
    );
    let mut report = ptr::null_mut();
    assert_eq!(
        unsafe { ccs_resolution_check(eta, 30, 1e-12, 1e-12, &mut report) },
        CcsStatus::Ok
    );
    unsafe {
        assert!(ccs_report_defect(report) <= 1e-6);
        assert!(ccs_report_estimate(report) < std::f64::consts::TAU);
        let n = ccs_report_term_count(report);
        assert_eq!(n, 61);
        let mut terms = vec![0.0; n];
        assert_eq!(
            ccs_report_terms(report, terms.as_mut_ptr(), n),
            CcsStatus::Ok
        );
        assert!(terms.iter().all(|&t| t >= 0.0));
        let len = ccs_report_json(report, ptr::null_mut(), 0);
        let mut buf = vec![0u8; len + 1];
        ccs_report_json(report, buf.as_mut_ptr().cast::<c_char>(), buf.len());
        let v: serde_json::Value = serde_json::from_slice(&buf[..len]).unwrap();
        assert_eq!(v["k_max"], 30);
        ccs_report_free(report);
        assert!(ccs_report_estimate(ptr::null()).is_nan());
        ccs_wavefunction_free(eta);
    }
    let bad = CString::new("gaussian").unwrap();
    let mut eta = ptr::null_mut();
    assert_eq!(
        unsafe { ccs_test_vector(bad.as_ptr(), 64, &mut eta) },
        CcsStatus::Domain
    );
    assert!(eta.is_null());
}

#[test]
fn header_declares_the_interface() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/circle_cs.h"))
            .unwrap();
    for name in [
        "ccs_erf",
        "ccs_overlap",
        "ccs_sample_state",
        "ccs_resolution_check",
        "ccs_report_free",
        "typedef struct CcsWaveFunction CcsWaveFunction;",
        "CCS_STATUS_TOLERANCE = 3",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

#[test]
fn c_program_links_against_the_static_library() {
    // Test binaries live in target/<profile>/deps; the static library one
    // level up.
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libcircle_cs_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let status = Command::new(std::env::var("CC").unwrap_or_else(|_| "cc".into()))
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler runs");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}
