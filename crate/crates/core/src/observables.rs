//! Expectation values in coherent states and the resolution of unity.
//!
//! For `α ≥ 0` the moments split at `φ = -π + α` into
//!
//! ```text
//! ⟨f⟩ = A² ∫_{-π}^{-π+α} f(φ, φ-α+2π)·exp(-(φ-α+2π)²) dφ
//!     + A² ∫_{-π+α}^{π}  f(φ, φ-α)   ·exp(-(φ-α)²)    dφ
//! ```
//!
//! (for `α < 0` the split is at `π + α` and the second panel carries
//! `φ-α-2π`). Position uses `f = φ`, momentum `f = m + iu` and its square
//! `f = 1 + (m + iu)²`, the pointwise action of `-d²/dφ²` away from the kink.
//! The closed forms are
//!
//! ```text
//! ⟨Q⟩  = α - A²·π^{3/2}·(erf(π) - erf(π - α))      (α ≥ 0, odd in α)
//! ⟨P⟩  = m
//! ⟨P²⟩ = m² + 1/2 + A²·π·exp(-π²)
//! ```

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::circle_states::{
    dft_bin_to_coefficient, fourier_coefficients, normalization_constant, sample_state, wrap,
    SampledWaveFunction,
};
use crate::output::{sig17_vec, Sig17};
use crate::quadrature::{integrate, QuadratureSpec};
use crate::special_fn::erf_real;
use crate::{ComplexValue, Error, Result, StateLabel};

/// `⟨m,α|Q|m,α⟩`; independent of `m`.
pub fn expectation_q(label: StateLabel) -> f64 {
    let alpha = label.alpha.value();
    if alpha < 0.0 {
        return -q_mean_nonnegative(-alpha);
    }
    q_mean_nonnegative(alpha)
}

fn q_mean_nonnegative(alpha: f64) -> f64 {
    let a = normalization_constant();
    let erf = |x: f64| erf_real(x).expect("argument in [0, π]");
    alpha - a * a * PI.powf(1.5) * (erf(PI) - erf(PI - alpha))
}

/// `⟨m,α|P|m,α⟩ = m`.
pub fn expectation_p(label: StateLabel) -> f64 {
    label.m as f64
}

/// `A²·π·exp(-π²)`, the seam correction to the momentum variance.
pub fn seam_correction() -> f64 {
    let a = normalization_constant();
    a * a * PI * (-PI * PI).exp()
}

/// `⟨m,α|P²|m,α⟩ = m² + 1/2 + A²·π·exp(-π²)`; independent of `α`.
pub fn expectation_p2(label: StateLabel) -> f64 {
    let m = label.m as f64;
    m * m + 0.5 + seam_correction()
}

/// `⟨P²⟩ - ⟨P⟩²`, the same for every label.
pub fn momentum_dispersion(_label: StateLabel) -> f64 {
    // m² cancels symbolically.
    0.5 + seam_correction()
}

/// Integrates `weight(φ, u)·exp(-u²)·A²` over the two panels on which the
/// wrapped displacement `u` is a single smooth branch.
fn two_panel_moment<F>(alpha: f64, weight: F, spec: &QuadratureSpec) -> Result<ComplexValue>
where
    F: Fn(f64, f64) -> ComplexValue + Sync,
{
    let a2 = normalization_constant().powi(2);
    let panel = |lo: f64, hi: f64, shift: f64| -> Result<ComplexValue> {
        if hi <= lo {
            return Ok(ComplexValue::new(0.0, 0.0));
        }
        let r = integrate(
            |phi| {
                let u = phi - alpha + shift;
                weight(phi, u) * (-u * u).exp()
            },
            lo,
            hi,
            spec,
        )?;
        Ok(r.value * a2)
    };
    if alpha >= 0.0 {
        Ok(panel(-PI, -PI + alpha, TAU)? + panel(-PI + alpha, PI, 0.0)?)
    } else {
        Ok(panel(-PI, PI + alpha, 0.0)? + panel(PI + alpha, PI, -TAU)?)
    }
}

/// `⟨Q⟩` by quadrature of the two-panel integral.
pub fn expectation_q_quadrature(label: StateLabel, spec: &QuadratureSpec) -> Result<f64> {
    two_panel_moment(
        label.alpha.value(),
        |phi, _| ComplexValue::new(phi, 0.0),
        spec,
    )
    .map(|v| v.re)
}

/// `⟨P⟩` by quadrature of `(m + iu)·exp(-u²)`; the imaginary part should
/// vanish.
pub fn expectation_p_quadrature(label: StateLabel, spec: &QuadratureSpec) -> Result<ComplexValue> {
    let m = label.m as f64;
    two_panel_moment(label.alpha.value(), |_, u| ComplexValue::new(m, u), spec)
}

/// `⟨P²⟩` by quadrature of `[1 + (m + iu)²]·exp(-u²)`.
pub fn expectation_p2_quadrature(label: StateLabel, spec: &QuadratureSpec) -> Result<ComplexValue> {
    let m = label.m as f64;
    two_panel_moment(
        label.alpha.value(),
        |_, u| {
            let z = ComplexValue::new(m, u);
            1.0 + z * z
        },
        spec,
    )
}

/// `Σ n²|a_n|² / Σ |a_n|²` over `|n| ≤ n_max`, from the Fourier coefficients
/// of the state sampled on `n_grid` points. This is the quadratic form
/// `‖ψ'‖²/‖ψ‖²`, which counts the derivative jump at the kink.
pub fn expectation_p2_fourier(label: StateLabel, n_grid: usize, n_max: usize) -> Result<f64> {
    let psi = sample_state(label, n_grid)?;
    let a = fourier_coefficients(&psi, n_max)?;
    let (mut num, mut den) = (0.0, 0.0);
    for (n, c) in a.iter() {
        let w = c.norm_sqr();
        num += (n * n) as f64 * w;
        den += w;
    }
    Ok(num / den)
}

/// Vectors shipped for the resolution-of-unity check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TestVector {
    /// `|0, 0⟩`
    Vacuum,
    /// `exp(ikφ)/√(2π)`
    PlaneWave(i64),
    /// `|0, -π/2⟩ + |0, π/2⟩`, normalized
    TwoPeak,
}

impl TestVector {
    /// Samples the vector on `n_grid` points and normalizes it on that grid.
    pub fn sample(self, n_grid: usize) -> Result<SampledWaveFunction> {
        let psi = match self {
            TestVector::Vacuum => sample_state(StateLabel::vacuum(), n_grid)?,
            TestVector::PlaneWave(k) => SampledWaveFunction::from_fn(n_grid, |phi| {
                ComplexValue::from_polar(1.0 / TAU.sqrt(), k as f64 * phi.value())
            })?,
            TestVector::TwoPeak => {
                let left = sample_state(StateLabel::new(0, -0.5 * PI)?, n_grid)?;
                let right = sample_state(StateLabel::new(0, 0.5 * PI)?, n_grid)?;
                let sum = left
                    .amplitudes()
                    .iter()
                    .zip(right.amplitudes())
                    .map(|(a, b)| a + b)
                    .collect();
                SampledWaveFunction::from_amplitudes(sum)?
            }
        };
        psi.normalized()
    }

    pub fn name(self) -> String {
        match self {
            TestVector::Vacuum => "vacuum".into(),
            TestVector::PlaneWave(k) => format!("plane_wave_{k}"),
            TestVector::TwoPeak => "two_peak".into(),
        }
    }
}

impl std::str::FromStr for TestVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vacuum" => Ok(TestVector::Vacuum),
            "two_peak" => Ok(TestVector::TwoPeak),
            _ => s
                .strip_prefix("plane_wave_")
                .and_then(|k| k.parse().ok())
                .map(TestVector::PlaneWave)
                .ok_or_else(|| {
                    Error::domain(format!(
                        "unknown test vector `{s}` (expected vacuum, plane_wave_N or two_peak)"
                    ))
                }),
        }
    }
}

/// Outcome of [`resolution_check`].
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ResolutionReport {
    pub k_max: usize,
    /// `Σ_{|k|≤k_max} ∫|⟨k,α|η⟩|² dα`, which should approach 2π.
    #[serde(serialize_with = "ser_f64")]
    pub estimate: f64,
    /// `|estimate - 2π|`
    #[serde(serialize_with = "ser_f64")]
    pub defect: f64,
    /// `∫|⟨k,α|η⟩|² dα` for `k = -k_max..=k_max`.
    #[serde(serialize_with = "ser_f64_slice")]
    pub per_k_terms: Vec<f64>,
    pub engine: EngineInfo,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct EngineInfo {
    #[serde(serialize_with = "ser_f64")]
    pub abs_tol: f64,
    #[serde(serialize_with = "ser_f64")]
    pub rel_tol: f64,
    pub max_depth: u32,
    pub n_grid: usize,
    #[serde(serialize_with = "ser_f64")]
    pub err_est: f64,
    pub evaluations: usize,
}

fn ser_f64<S: serde::Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&Sig17(*x), s)
}

fn ser_f64_slice<S: serde::Serializer>(xs: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&sig17_vec(xs), s)
}

impl ResolutionReport {
    /// `∫|⟨k,α|η⟩|² dα` for one `k`, if `|k| ≤ k_max`.
    pub fn term(&self, k: i64) -> Option<f64> {
        let idx = k + self.k_max as i64;
        self.per_k_terms.get(usize::try_from(idx).ok()?).copied()
    }

    /// Partial estimate over `|k| ≤ k` (clamped to `k_max`).
    pub fn estimate_up_to(&self, k: usize) -> f64 {
        let k = k.min(self.k_max) as i64;
        (-k..=k).map(|j| self.term(j).unwrap_or(0.0)).sum()
    }

    /// `(k, estimate_up_to(k))` for `k = 0..=k_max`.
    pub fn convergence(&self) -> Vec<(usize, f64)> {
        (0..=self.k_max)
            .map(|k| (k, self.estimate_up_to(k)))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Measures `Σ_{|k|≤k_max} ∫_{-π}^{π} |⟨k,α|η⟩|² dα`.
///
/// For each `α` the inner products with every `k` are the Fourier
/// coefficients of `A·g_α·η` (with `g_α` the wrapped Gaussian envelope), so
/// one FFT per node yields the whole `k` range. As a function of `α` the
/// integrand has kinks where a grid angle sits opposite `α`; those angles
/// are passed to the engine as split points.
pub fn resolution_check(
    eta: &SampledWaveFunction,
    k_max: usize,
    spec: &QuadratureSpec,
) -> Result<ResolutionReport> {
    let norm = eta.norm_sq();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::domain(format!(
            "η must be normalized (periodic-rule norm² = {norm})"
        )));
    }
    let n = eta.n_grid();
    if n < (4 * k_max).max(2) {
        return Err(Error::domain(format!(
            "n_grid = {n} is too coarse for k_max = {k_max} (need ≥ 4·k_max)"
        )));
    }

    let mut splits = spec.split_points().to_vec();
    splits.extend(eta.grid().map(|phi| wrap(phi + PI)).filter(|&s| s > -PI));
    let spec = spec.clone().with_split_points(splits);

    let fft: Arc<dyn Fft<f64>> = FftPlanner::new().plan_fft_forward(n);
    let a = normalization_constant();
    let phis: Vec<f64> = eta.grid().collect();
    let amps = eta.amplitudes();
    let integrand = |alpha: f64| -> Vec<f64> {
        let mut buf: Vec<ComplexValue> = phis
            .iter()
            .zip(amps)
            .map(|(&phi, &e)| {
                let d = wrap(phi - alpha);
                e * (a * (-0.5 * d * d).exp())
            })
            .collect();
        fft.process(&mut buf);
        (-(k_max as i64)..=k_max as i64)
            .map(|k| (dft_bin_to_coefficient(&buf, k) * TAU).norm_sqr())
            .collect()
    };

    let r = integrate(integrand, -PI, PI, &spec)?;
    let per_k_terms = r.value;
    // Same summation order as estimate_up_to(k_max).
    let estimate = per_k_terms.iter().sum::<f64>();
    Ok(ResolutionReport {
        k_max,
        estimate,
        defect: (estimate - TAU).abs(),
        per_k_terms,
        engine: EngineInfo {
            abs_tol: spec.abs_tol,
            rel_tol: spec.rel_tol,
            max_depth: spec.max_depth,
            n_grid: n,
            err_est: r.err_est,
            evaluations: r.evaluations,
        },
    })
}
