//! Angles, state labels and wavefunctions on the circle.
//!
//! The circle is charted by `φ ∈ [-π, π)`. A coherent state `|m, α⟩` has the
//! wavefunction
//!
//! ```text
//! ψ(φ) = A · exp(imφ) · exp(-d(φ, α)² / 2),   d(φ, α) = wrap(φ - α)
//! ```
//!
//! where `wrap` takes the representative in `[-π, π)`. The wrapped distance
//! folds the two branches of the modular shift into one expression: for
//! `α ∈ [0, π]`, `d = φ - α + 2π` on `[-π, -π + α)` and `d = φ - α` elsewhere,
//! with the mirror-image split for negative `α`. The envelope is continuous
//! on the circle and has a kink at `φ = wrap(α + π)`.

use std::f64::consts::{PI, TAU};
use std::io::Write;
use std::sync::OnceLock;

use rustfft::FftPlanner;

use crate::output::sig17;
use crate::special_fn::erf_real;
use crate::{ComplexValue, Error, Result};

/// A point of the circle, stored as its representative in `[-π, π)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    /// Wraps any finite real into `[-π, π)`.
    pub fn new(x: f64) -> Result<Self> {
        wrap_angle(x)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<Angle> for f64 {
    fn from(a: Angle) -> f64 {
        a.0
    }
}

/// Canonical representative of `x` modulo 2π in `[-π, π)`.
pub fn wrap_angle(x: f64) -> Result<Angle> {
    if !x.is_finite() {
        return Err(Error::domain(format!("cannot wrap non-finite angle {x}")));
    }
    Ok(Angle(wrap(x)))
}

#[inline]
pub(crate) fn wrap(x: f64) -> f64 {
    if (-PI..PI).contains(&x) {
        return x;
    }
    let k = (x / TAU).round();
    let mut v = (-k).mul_add(TAU, x);
    while v >= PI {
        v -= TAU;
    }
    while v < -PI {
        v += TAU;
    }
    v
}

/// Label `(m, α)` of the coherent state `|m, α⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateLabel {
    pub m: i64,
    pub alpha: Angle,
}

impl StateLabel {
    pub fn new(m: i64, alpha: f64) -> Result<Self> {
        Ok(StateLabel {
            m,
            alpha: wrap_angle(alpha)?,
        })
    }

    pub const fn vacuum() -> Self {
        StateLabel {
            m: 0,
            alpha: Angle::ZERO,
        }
    }
}

/// `A = 1/√(∫_{-π}^{π} exp(-φ²) dφ) = 1/√(√π·erf(π))`.
pub fn normalization_constant() -> f64 {
    static A: OnceLock<f64> = OnceLock::new();
    *A.get_or_init(|| {
        let erf_pi = erf_real(PI).expect("π lies inside the erf box");
        1.0 / (PI.sqrt() * erf_pi).sqrt()
    })
}

/// Value of `|m, α⟩` at `φ`.
pub fn coherent_eval(label: StateLabel, phi: Angle) -> ComplexValue {
    eval_at(label, phi.0)
}

/// Same as [`coherent_eval`] for a raw `φ`, which must already lie in
/// `[-π, π]` (the endpoint `π` is the seam seen from the left).
#[inline]
pub(crate) fn eval_at(label: StateLabel, phi: f64) -> ComplexValue {
    let d = wrap(phi - label.alpha.0);
    let envelope = normalization_constant() * (-0.5 * d * d).exp();
    ComplexValue::from_polar(envelope, label.m as f64 * phi)
}

/// The displaced Gaussian without wraparound, `A·exp(imφ)·exp(-(φ-α)²/2)`
/// on `[-π, π)`. It agrees with [`coherent_eval`] wherever `|φ - α| < π` and
/// is discontinuous at the chart boundary `φ = ±π` once `α ≠ 0`.
pub fn coherent_eval_unwrapped(label: StateLabel, phi: f64) -> ComplexValue {
    let u = phi - label.alpha.0;
    let envelope = normalization_constant() * (-0.5 * u * u).exp();
    ComplexValue::from_polar(envelope, label.m as f64 * phi)
}

/// The vacuum `|0, 0⟩ = A·exp(-φ²/2)`.
pub fn vacuum() -> impl Fn(Angle) -> ComplexValue + Copy + Send + Sync {
    |phi| coherent_eval(StateLabel::vacuum(), phi)
}

/// Angle where the envelope of a state displaced by `alpha` has its kink,
/// or `None` when that is the chart boundary itself.
pub(crate) fn seam_of(alpha: Angle) -> Option<f64> {
    let s = wrap(alpha.0 + PI);
    (s > -PI).then_some(s)
}

/// Wavefunction sampled on the uniform grid `φ_j = -π + 2πj/n`,
/// `j = 0..n`. The point `-π` is on the grid, `π` is not.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledWaveFunction {
    amplitudes: Vec<ComplexValue>,
}

impl SampledWaveFunction {
    pub fn from_amplitudes(amplitudes: Vec<ComplexValue>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::domain(
                "a sampled wavefunction needs at least 2 grid points",
            ));
        }
        if amplitudes
            .iter()
            .any(|a| !(a.re.is_finite() && a.im.is_finite()))
        {
            return Err(Error::domain("amplitudes must be finite"));
        }
        Ok(SampledWaveFunction { amplitudes })
    }

    pub fn from_fn(n_grid: usize, f: impl Fn(Angle) -> ComplexValue) -> Result<Self> {
        let amplitudes = (0..n_grid)
            .map(|j| f(Angle(grid_point(j, n_grid))))
            .collect();
        Self::from_amplitudes(amplitudes)
    }

    pub fn n_grid(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[ComplexValue] {
        &self.amplitudes
    }

    pub fn phi(&self, j: usize) -> f64 {
        grid_point(j, self.n_grid())
    }

    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_grid()).map(|j| self.phi(j))
    }

    /// `∫|ψ|²` by the periodic trapezoidal rule.
    pub fn norm_sq(&self) -> f64 {
        let h = TAU / self.n_grid() as f64;
        h * self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>()
    }

    /// Rescaled to unit periodic-rule norm.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sq();
        if n == 0.0 {
            return Err(Error::domain("cannot normalize the zero wavefunction"));
        }
        let s = 1.0 / n.sqrt();
        Ok(SampledWaveFunction {
            amplitudes: self.amplitudes.iter().map(|a| a * s).collect(),
        })
    }

    /// `Σ_j conj(self_j)·other_j·h`, the periodic-rule inner product.
    pub fn inner(&self, other: &Self) -> Result<ComplexValue> {
        if self.n_grid() != other.n_grid() {
            return Err(Error::domain(
                "inner product of wavefunctions on different grids",
            ));
        }
        let h = TAU / self.n_grid() as f64;
        let s: ComplexValue = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(s * h)
    }

    /// Multiplication by `exp(imφ)`.
    pub fn with_phase(&self, m: i64) -> Self {
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(j, a)| a * ComplexValue::from_polar(1.0, m as f64 * self.phi(j)))
            .collect();
        SampledWaveFunction { amplitudes }
    }

    /// Rotation `ψ(φ) ↦ ψ(φ - α)` realized as a cyclic shift of the samples.
    /// `α` must be a multiple of the grid spacing.
    pub fn shifted(&self, alpha: f64) -> Result<Self> {
        let n = self.n_grid();
        let steps = alpha * n as f64 / TAU;
        let s = steps.round();
        if !steps.is_finite() || (steps - s).abs() > 1e-9 {
            return Err(Error::domain(format!(
                "shift {alpha} is not a multiple of the grid spacing 2π/{n}"
            )));
        }
        let s = (s as i64).rem_euclid(n as i64) as usize;
        let mut amplitudes = self.amplitudes.clone();
        amplitudes.rotate_right(s);
        Ok(SampledWaveFunction { amplitudes })
    }

    /// Writes `phi,re,im` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "phi,re,im")?;
        for (j, a) in self.amplitudes.iter().enumerate() {
            writeln!(
                out,
                "{},{},{}",
                sig17(self.phi(j)),
                sig17(a.re),
                sig17(a.im)
            )?;
        }
        Ok(())
    }
}

#[inline]
fn grid_point(j: usize, n: usize) -> f64 {
    -PI + TAU * j as f64 / n as f64
}

/// Samples `|m, α⟩` on an `n_grid`-point grid.
pub fn sample_state(label: StateLabel, n_grid: usize) -> Result<SampledWaveFunction> {
    if n_grid < 16 {
        return Err(Error::domain(format!(
            "n_grid must be at least 16, got {n_grid}"
        )));
    }
    SampledWaveFunction::from_fn(n_grid, |phi| coherent_eval(label, phi))
}

/// Coefficients `a_n` of `ψ(φ) = Σ a_n exp(inφ)` for `|n| ≤ n_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierCoefficients {
    n_max: usize,
    coeffs: Vec<ComplexValue>,
}

impl FourierCoefficients {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `a_n`; `None` when `|n| > n_max`.
    pub fn get(&self, n: i64) -> Option<ComplexValue> {
        let idx = n + self.n_max as i64;
        (0..self.coeffs.len() as i64)
            .contains(&idx)
            .then(|| self.coeffs[idx as usize])
    }

    /// `(n, a_n)` for `n = -n_max..=n_max`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, ComplexValue)> + '_ {
        let off = self.n_max as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &a)| (i as i64 - off, a))
    }

    /// `2π·Σ|a_n|²`, which approaches `∫|ψ|²` as `n_max` grows.
    pub fn parseval_norm_sq(&self) -> f64 {
        TAU * self.coeffs.iter().map(|a| a.norm_sqr()).sum::<f64>()
    }
}

/// Fourier coefficients by the periodic trapezoidal rule (one FFT).
pub fn fourier_coefficients(
    psi: &SampledWaveFunction,
    n_max: usize,
) -> Result<FourierCoefficients> {
    let n = psi.n_grid();
    if n < 4 * n_max {
        return Err(Error::domain(format!(
            "n_grid = {n} is below 4·n_max = {}",
            4 * n_max
        )));
    }
    let mut buf = psi.amplitudes.clone();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let coeffs = (-(n_max as i64)..=n_max as i64)
        .map(|k| dft_bin_to_coefficient(&buf, k))
        .collect();
    Ok(FourierCoefficients { n_max, coeffs })
}

/// With `φ_j = -π + 2πj/n`, `exp(-ikφ_j) = (-1)^k·exp(-2πijk/n)`, so the
/// coefficient is the plain DFT bin with an alternating sign.
#[inline]
pub(crate) fn dft_bin_to_coefficient(bins: &[ComplexValue], k: i64) -> ComplexValue {
    let n = bins.len();
    let x = bins[k.rem_euclid(n as i64) as usize] / n as f64;
    if k.rem_euclid(2) == 0 {
        x
    } else {
        -x
    }
}
