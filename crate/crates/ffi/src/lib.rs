//! C interface to `circle_cs`.
//!
//! Every fallible call returns a [`CcsStatus`]; results go through out
//! pointers. After a non-`Ok` status, [`ccs_last_error_message`] returns a
//! description of the failure on the calling thread. Sampled wave functions
//! and resolution reports are opaque handles released with their `_free`
//! function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use circle_cs::{
    ComplexValue, Error, QuadratureSpec, ResolutionReport, SampledWaveFunction, StateLabel,
    TestVector,
};

/// Status codes. The non-zero values match the command-line exit codes
/// where the meaning overlaps.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CcsStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Tolerance = 3,
    Io = 4,
    Panic = 5,
}

/// Uniformly sampled wave function.
pub struct CcsWaveFunction {
    inner: SampledWaveFunction,
}

/// Result of a resolution-of-unity check.
pub struct CcsResolutionReport {
    inner: ResolutionReport,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn fail(e: Error) -> CcsStatus {
    let status = match e {
        Error::Domain(_) => CcsStatus::Domain,
        Error::ToleranceNotMet { .. } => CcsStatus::Tolerance,
        Error::Io(_) => CcsStatus::Io,
    };
    set_error(e.to_string());
    status
}

fn null_arg(name: &str) -> CcsStatus {
    set_error(format!("`{name}` is null"));
    CcsStatus::NullPointer
}

fn guard(body: impl FnOnce() -> CcsStatus) -> CcsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic".into());
            CcsStatus::Panic
        }
    }
}

fn spec(abs_tol: f64, rel_tol: f64) -> Result<QuadratureSpec, Error> {
    QuadratureSpec::new(abs_tol, rel_tol, QuadratureSpec::default().max_depth)
}

unsafe fn write_complex(v: ComplexValue, re: *mut f64, im: *mut f64) {
    *re = v.re;
    *im = v.im;
}

/// Copies the last error message of this thread into `buf` (NUL
/// terminated, truncated to `len` bytes) and returns the full message
/// length excluding the terminator. `buf` may be null to query the length.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn ccs_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Normalization constant of the wrapped Gaussian states.
#[no_mangle]
pub extern "C" fn ccs_normalization_constant() -> f64 {
    circle_cs::normalization_constant()
}

/// erf(re + i·im) inside the certified box |re|, |im| ≤ 12.
///
/// # Safety
/// `out_re` and `out_im` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ccs_erf(
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> CcsStatus {
    if out_re.is_null() || out_im.is_null() {
        return null_arg("out");
    }
    guard(|| match circle_cs::erf_complex(ComplexValue::new(re, im)) {
        Ok(w) => {
            write_complex(w, out_re, out_im);
            CcsStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// Value of the coherent state |m, alpha⟩ at phi.
///
/// # Safety
/// `out_re` and `out_im` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ccs_coherent_eval(
    m: i64,
    alpha: f64,
    phi: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> CcsStatus {
    if out_re.is_null() || out_im.is_null() {
        return null_arg("out");
    }
    guard(|| {
        let r = StateLabel::new(m, alpha)
            .and_then(|l| circle_cs::wrap_angle(phi).map(|p| circle_cs::coherent_eval(l, p)));
        match r {
            Ok(v) => {
                write_complex(v, out_re, out_im);
                CcsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

unsafe fn write_overlap(
    r: circle_cs::Result<circle_cs::OverlapResult>,
    out_re: *mut f64,
    out_im: *mut f64,
    out_err_est: *mut f64,
) -> CcsStatus {
    match r {
        Ok(r) => {
            write_complex(r.value, out_re, out_im);
            if !out_err_est.is_null() {
                *out_err_est = r.err_est;
            }
            CcsStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// ⟨m, alpha | n, beta⟩ from the closed forms. `out_err_est` may be null.
///
/// # Safety
/// `out_re` and `out_im` must be valid for writes; `out_err_est` must be
/// null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ccs_overlap(
    m: i64,
    alpha: f64,
    n: i64,
    beta: f64,
    out_re: *mut f64,
    out_im: *mut f64,
    out_err_est: *mut f64,
) -> CcsStatus {
    if out_re.is_null() || out_im.is_null() {
        return null_arg("out");
    }
    guard(|| {
        let r = StateLabel::new(m, alpha)
            .and_then(|a| StateLabel::new(n, beta).and_then(|b| circle_cs::overlap(&a, &b)));
        write_overlap(r, out_re, out_im, out_err_est)
    })
}

/// ⟨m, alpha | n, beta⟩ by adaptive quadrature.
///
/// # Safety
/// As [`ccs_overlap`].
#[no_mangle]
pub unsafe extern "C" fn ccs_overlap_quadrature(
    m: i64,
    alpha: f64,
    n: i64,
    beta: f64,
    abs_tol: f64,
    rel_tol: f64,
    out_re: *mut f64,
    out_im: *mut f64,
    out_err_est: *mut f64,
) -> CcsStatus {
    if out_re.is_null() || out_im.is_null() {
        return null_arg("out");
    }
    guard(|| {
        let r = spec(abs_tol, rel_tol).and_then(|s| {
            let a = StateLabel::new(m, alpha)?;
            let b = StateLabel::new(n, beta)?;
            circle_cs::overlap_quadrature(&a, &b, &s)
        });
        write_overlap(r, out_re, out_im, out_err_est)
    })
}

unsafe fn moment(m: i64, alpha: f64, out: *mut f64, f: fn(StateLabel) -> f64) -> CcsStatus {
    if out.is_null() {
        return null_arg("out");
    }
    guard(|| match StateLabel::new(m, alpha) {
        Ok(l) => {
            *out = f(l);
            CcsStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// ⟨Q⟩ in |m, alpha⟩.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ccs_expectation_q(m: i64, alpha: f64, out: *mut f64) -> CcsStatus {
    moment(m, alpha, out, circle_cs::expectation_q)
}

/// ⟨P⟩ in |m, alpha⟩.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ccs_expectation_p(m: i64, alpha: f64, out: *mut f64) -> CcsStatus {
    moment(m, alpha, out, circle_cs::expectation_p)
}

/// ⟨P²⟩ in |m, alpha⟩.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ccs_expectation_p2(m: i64, alpha: f64, out: *mut f64) -> CcsStatus {
    moment(m, alpha, out, circle_cs::expectation_p2)
}

/// ⟨P²⟩ - ⟨P⟩² in |m, alpha⟩.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ccs_momentum_dispersion(m: i64, alpha: f64, out: *mut f64) -> CcsStatus {
    moment(m, alpha, out, circle_cs::momentum_dispersion)
}

fn into_handle(inner: SampledWaveFunction, out: *mut *mut CcsWaveFunction) {
    let h = Box::into_raw(Box::new(CcsWaveFunction { inner }));
    // SAFETY: checked non-null by every caller.
    unsafe { *out = h };
}

/// Samples |m, alpha⟩ on `n_grid` points φ_j = -π + 2πj/n_grid.
///
/// # Safety
/// `out` must be valid for writes. The handle written there must be
/// released with [`ccs_wavefunction_free`].
#[no_mangle]
pub unsafe extern "C" fn ccs_sample_state(
    m: i64,
    alpha: f64,
    n_grid: usize,
    out: *mut *mut CcsWaveFunction,
) -> CcsStatus {
    if out.is_null() {
        return null_arg("out");
    }
    guard(
        || match StateLabel::new(m, alpha).and_then(|l| circle_cs::sample_state(l, n_grid)) {
            Ok(psi) => {
                into_handle(psi, out);
                CcsStatus::Ok
            }
            Err(e) => fail(e),
        },
    )
}

/// Samples a named test vector (`vacuum`, `plane_wave_N`, `two_peak`),
/// normalized on the grid.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` as in [`ccs_sample_state`].
#[no_mangle]
pub unsafe extern "C" fn ccs_test_vector(
    name: *const c_char,
    n_grid: usize,
    out: *mut *mut CcsWaveFunction,
) -> CcsStatus {
    if name.is_null() {
        return null_arg("name");
    }
    if out.is_null() {
        return null_arg("out");
    }
    guard(|| {
        let name = match CStr::from_ptr(name).to_str() {
            Ok(s) => s,
            Err(_) => return fail(Error::domain("test vector name is not UTF-8")),
        };
        match name.parse::<TestVector>().and_then(|v| v.sample(n_grid)) {
            Ok(psi) => {
                into_handle(psi, out);
                CcsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Builds a wave function from `len` grid amplitudes.
///
/// # Safety
/// `re` and `im` must point to `len` readable values; `out` as in
/// [`ccs_sample_state`].
#[no_mangle]
pub unsafe extern "C" fn ccs_wavefunction_from_amplitudes(
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut CcsWaveFunction,
) -> CcsStatus {
    if re.is_null() || im.is_null() {
        return null_arg("amplitudes");
    }
    if out.is_null() {
        return null_arg("out");
    }
    guard(|| {
        let re = std::slice::from_raw_parts(re, len);
        let im = std::slice::from_raw_parts(im, len);
        let amps = re
            .iter()
            .zip(im)
            .map(|(&a, &b)| ComplexValue::new(a, b))
            .collect();
        match SampledWaveFunction::from_amplitudes(amps) {
            Ok(psi) => {
                into_handle(psi, out);
                CcsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Number of grid points, or 0 for a null handle.
///
/// # Safety
/// `psi` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ccs_wavefunction_len(psi: *const CcsWaveFunction) -> usize {
    psi.as_ref().map_or(0, |p| p.inner.n_grid())
}

/// Copies the amplitudes into `re` and `im`, which must hold exactly
/// `ccs_wavefunction_len(psi)` values.
///
/// # Safety
/// `psi` must be a live handle; `re` and `im` must point to `len` writable
/// values.
#[no_mangle]
pub unsafe extern "C" fn ccs_wavefunction_amplitudes(
    psi: *const CcsWaveFunction,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> CcsStatus {
    let Some(psi) = psi.as_ref() else {
        return null_arg("psi");
    };
    if re.is_null() || im.is_null() {
        return null_arg("out");
    }
    let amps = psi.inner.amplitudes();
    if len != amps.len() {
        return fail(Error::domain(format!(
            "buffer holds {len} values, wave function has {}",
            amps.len()
        )));
    }
    let re = std::slice::from_raw_parts_mut(re, len);
    let im = std::slice::from_raw_parts_mut(im, len);
    for (i, a) in amps.iter().enumerate() {
        re[i] = a.re;
        im[i] = a.im;
    }
    CcsStatus::Ok
}

/// Releases a wave function. Null is ignored.
///
/// # Safety
/// `psi` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ccs_wavefunction_free(psi: *mut CcsWaveFunction) {
    if !psi.is_null() {
        drop(Box::from_raw(psi));
    }
}

/// Runs the resolution-of-unity check for a grid-normalized `eta`.
///
/// # Safety
/// `eta` must be a live handle; `out` must be valid for writes and the
/// report written there released with [`ccs_report_free`].
#[no_mangle]
pub unsafe extern "C" fn ccs_resolution_check(
    eta: *const CcsWaveFunction,
    k_max: usize,
    abs_tol: f64,
    rel_tol: f64,
    out: *mut *mut CcsResolutionReport,
) -> CcsStatus {
    let Some(eta) = eta.as_ref() else {
        return null_arg("eta");
    };
    if out.is_null() {
        return null_arg("out");
    }
    guard(|| {
        match spec(abs_tol, rel_tol)
            .and_then(|s| circle_cs::resolution_check(&eta.inner, k_max, &s))
        {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(CcsResolutionReport { inner }));
                CcsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Σ_k ∫|⟨k,α|η⟩|² dα, or NaN for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ccs_report_estimate(report: *const CcsResolutionReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.inner.estimate)
}

/// |estimate - 2π|, or NaN for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ccs_report_defect(report: *const CcsResolutionReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.inner.defect)
}

/// Number of per-k terms (2·k_max + 1), or 0 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ccs_report_term_count(report: *const CcsResolutionReport) -> usize {
    report.as_ref().map_or(0, |r| r.inner.per_k_terms.len())
}

/// Copies the per-k terms, ordered k = -k_max..=k_max.
///
/// # Safety
/// `report` must be a live handle and `out` must point to `len` writable
/// values, `len` being [`ccs_report_term_count`].
#[no_mangle]
pub unsafe extern "C" fn ccs_report_terms(
    report: *const CcsResolutionReport,
    out: *mut f64,
    len: usize,
) -> CcsStatus {
    let Some(r) = report.as_ref() else {
        return null_arg("report");
    };
    if out.is_null() {
        return null_arg("out");
    }
    let terms = &r.inner.per_k_terms;
    if len != terms.len() {
        return fail(Error::domain(format!(
            "buffer holds {len} values, report has {}",
            terms.len()
        )));
    }
    ptr::copy_nonoverlapping(terms.as_ptr(), out, len);
    CcsStatus::Ok
}

/// Writes the report as JSON into `buf` like [`ccs_last_error_message`]
/// and returns the full length excluding the terminator.
///
/// # Safety
/// `report` must be a live handle; `buf` null or `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn ccs_report_json(
    report: *const CcsResolutionReport,
    buf: *mut c_char,
    len: usize,
) -> usize {
    let Some(r) = report.as_ref() else {
        return 0;
    };
    let json = r.inner.to_json();
    if !buf.is_null() && len > 0 {
        let n = json.len().min(len - 1);
        ptr::copy_nonoverlapping(json.as_ptr().cast::<c_char>(), buf, n);
        *buf.add(n) = 0;
    }
    json.len()
}

/// Releases a report. Null is ignored.
///
/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ccs_report_free(report: *mut CcsResolutionReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
