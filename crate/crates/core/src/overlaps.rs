//! Inner products `⟨m,α|n,β⟩` of coherent states.
//!
//! For `0 ≤ α ≤ β ≤ π` (the canonical wedge) the product splits along the
//! kinks of the two wrapped envelopes into
//!
//! ```text
//! ⟨m,α|n,β⟩ = A²·(I₁ + I₂)
//! I₁ = ∫_{α-π}^{β-π} exp(ikφ)·exp(-(φ-α)²/2)·exp(-(φ-β+2π)²/2) dφ
//! I₂ = ∫_{β-π}^{π+α} exp(ikφ)·exp(-(φ-α)²/2)·exp(-(φ-β)²/2)   dφ
//! ```
//!
//! with `k = n - m`. `I₂` already includes the arc `[-π, α-π)` moved up by
//! 2π, so the two panels tile a full period. Completing the square gives,
//! with `δ = (β-α)/2` and `c = (α+β)/2`,
//!
//! ```text
//! I₁ = (√π/2)·exp(-(π-δ)²)·exp(ik(c-π))·exp(-k²/4)·[erf(δ + ik/2) + erf(δ - ik/2)]
//! I₂ = (√π/2)·exp(-δ²)    ·exp(ikc)    ·exp(-k²/4)·[erf(π-δ + ik/2) + erf(π-δ - ik/2)]
//! ```
//!
//! Arbitrary labels reach the wedge through a global rotation and, when the
//! rotated `β` is negative, a conjugate swap.

use std::f64::consts::PI;

use crate::circle_states::{eval_at, normalization_constant, seam_of, wrap};
use crate::quadrature::{integrate, QuadratureSpec};
use crate::special_fn::erf_unchecked;
use crate::{ComplexValue, Error, Result, StateLabel};

/// Largest `|n - m|` served by the closed forms; beyond it the erf arguments
/// leave the certified box and [`overlap`] falls back to quadrature.
pub const ANALYTIC_DN_LIMIT: i64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Analytic,
    Quadrature,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Quadrature => "quadrature",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OverlapResult {
    pub value: ComplexValue,
    pub method: Method,
    pub err_est: f64,
}

fn check_wedge(alpha: f64, beta: f64, dn: i64) -> Result<()> {
    if !(0.0..=PI).contains(&alpha) || !(alpha..=PI).contains(&beta) {
        return Err(Error::domain(format!(
            "({alpha}, {beta}) is outside the wedge 0 ≤ α ≤ β ≤ π"
        )));
    }
    if dn.abs() > ANALYTIC_DN_LIMIT {
        return Err(Error::domain(format!(
            "|n - m| = {} exceeds the closed-form limit {ANALYTIC_DN_LIMIT}",
            dn.abs()
        )));
    }
    Ok(())
}

/// `erf(x + ik/2) + erf(x - ik/2)`, real by conjugate symmetry.
fn erf_pair(x: f64, k: f64) -> f64 {
    let w = erf_unchecked(ComplexValue::new(x, 0.5 * k));
    let w_bar = erf_unchecked(ComplexValue::new(x, -0.5 * k));
    (w + w_bar).re
}

/// Closed form of `I₁(α, β, n-m)` on the wedge.
pub fn overlap_i1(alpha: f64, beta: f64, dn: i64) -> Result<ComplexValue> {
    check_wedge(alpha, beta, dn)?;
    let k = dn as f64;
    let half_gap = 0.5 * (beta - alpha);
    let centre = 0.5 * (alpha + beta);
    let magnitude = 0.5 * PI.sqrt() * (-(PI - half_gap).powi(2) - 0.25 * k * k).exp();
    Ok(ComplexValue::from_polar(
        magnitude * erf_pair(half_gap, k),
        k * (centre - PI),
    ))
}

/// Closed form of `I₂(α, β, n-m)` on the wedge.
pub fn overlap_i2(alpha: f64, beta: f64, dn: i64) -> Result<ComplexValue> {
    check_wedge(alpha, beta, dn)?;
    let k = dn as f64;
    let half_gap = 0.5 * (beta - alpha);
    let centre = 0.5 * (alpha + beta);
    let magnitude = 0.5 * PI.sqrt() * (-half_gap * half_gap - 0.25 * k * k).exp();
    Ok(ComplexValue::from_polar(
        magnitude * erf_pair(PI - half_gap, k),
        k * centre,
    ))
}

fn i1_integrand(alpha: f64, beta: f64, dn: i64) -> impl Fn(f64) -> ComplexValue + Sync {
    move |phi| {
        let u = phi - alpha;
        let v = phi - beta + 2.0 * PI;
        ComplexValue::from_polar((-0.5 * (u * u + v * v)).exp(), dn as f64 * phi)
    }
}

fn i2_integrand(alpha: f64, beta: f64, dn: i64) -> impl Fn(f64) -> ComplexValue + Sync {
    move |phi| {
        let u = phi - alpha;
        let v = phi - beta;
        ComplexValue::from_polar((-0.5 * (u * u + v * v)).exp(), dn as f64 * phi)
    }
}

/// `I₁` by direct quadrature of its defining integral. Zero-width
/// intervals give exactly zero.
pub fn overlap_i1_quadrature(
    alpha: f64,
    beta: f64,
    dn: i64,
    spec: &QuadratureSpec,
) -> Result<ComplexValue> {
    if !(0.0..=PI).contains(&alpha) || !(alpha..=PI).contains(&beta) {
        return Err(Error::domain("outside the wedge 0 ≤ α ≤ β ≤ π"));
    }
    if alpha == beta {
        return Ok(ComplexValue::new(0.0, 0.0));
    }
    integrate(i1_integrand(alpha, beta, dn), alpha - PI, beta - PI, spec).map(|r| r.value)
}

/// `I₂` by direct quadrature over `[β-π, π+α]`.
pub fn overlap_i2_quadrature(
    alpha: f64,
    beta: f64,
    dn: i64,
    spec: &QuadratureSpec,
) -> Result<ComplexValue> {
    if !(0.0..=PI).contains(&alpha) || !(alpha..=PI).contains(&beta) {
        return Err(Error::domain("outside the wedge 0 ≤ α ≤ β ≤ π"));
    }
    integrate(i2_integrand(alpha, beta, dn), beta - PI, PI + alpha, spec).map(|r| r.value)
}

/// `A²·(I₁ + I₂)` on the wedge.
/// `A²(I₁ + I₂)` together with `A²(|I₁| + |I₂|)`, the scale that bounds
/// the rounding error of the sum when the two arcs cancel.
fn wedge_overlap(beta: f64, dn: i64) -> (ComplexValue, f64) {
    let a2 = normalization_constant().powi(2);
    let i1 = overlap_i1(0.0, beta, dn).expect("wedge arguments");
    let i2 = overlap_i2(0.0, beta, dn).expect("wedge arguments");
    ((i1 + i2) * a2, (i1.norm() + i2.norm()) * a2)
}

/// Overlap from the closed forms. Self-overlaps are exactly 1; pairs with
/// `|n - m| > 16` are delegated to [`overlap_quadrature`] with default
/// tolerances.
pub fn overlap(a: &StateLabel, b: &StateLabel) -> Result<OverlapResult> {
    if a == b {
        return Ok(OverlapResult {
            value: ComplexValue::new(1.0, 0.0),
            method: Method::Analytic,
            err_est: 0.0,
        });
    }
    let dn = b.m - a.m;
    if dn.abs() > ANALYTIC_DN_LIMIT {
        return overlap_quadrature(a, b, &QuadratureSpec::default());
    }
    // ⟨m,α|n,β⟩ = exp(i(n-m)α)·⟨m,0|n,β'⟩ with β' = wrap(β - α).
    let rotation = ComplexValue::from_polar(1.0, dn as f64 * a.alpha.value());
    let beta = wrap(b.alpha.value() - a.alpha.value());
    let (core, scale) = if beta >= 0.0 {
        wedge_overlap(beta, dn)
    } else {
        // ⟨m,0|n,β'⟩ = conj⟨n,β'|m,0⟩ = conj(exp(-i(n-m)β')·⟨n,0|m,-β'⟩)
        let (swapped, scale) = wedge_overlap(-beta, -dn);
        (
            (ComplexValue::from_polar(1.0, -(dn as f64) * beta) * swapped).conj(),
            scale,
        )
    };
    Ok(OverlapResult {
        value: rotation * core,
        method: Method::Analytic,
        err_est: 64.0 * f64::EPSILON * scale.max(f64::MIN_POSITIVE),
    })
}

/// Overlap by adaptive quadrature of `conj(ψ_a)·ψ_b` over `[-π, π]`, split at
/// the envelope kinks of both states. The caller's split points are kept.
pub fn overlap_quadrature(
    a: &StateLabel,
    b: &StateLabel,
    spec: &QuadratureSpec,
) -> Result<OverlapResult> {
    let mut splits = spec.split_points().to_vec();
    splits.extend(seam_of(a.alpha));
    splits.extend(seam_of(b.alpha));
    let spec = spec.clone().with_split_points(splits);
    let (a, b) = (*a, *b);
    let r = integrate(
        move |phi| eval_at(a, phi).conj() * eval_at(b, phi),
        -PI,
        PI,
        &spec,
    )?;
    Ok(OverlapResult {
        value: r.value,
        method: Method::Quadrature,
        err_est: r.err_est,
    })
}

/// Candidate prefactors in front of `I₁ + I₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prefactor {
    A,
    ASquared,
}

impl Prefactor {
    pub fn value(self) -> f64 {
        let a = normalization_constant();
        match self {
            Prefactor::A => a,
            Prefactor::ASquared => a * a,
        }
    }
}

/// Result of fitting the prefactor at `(α, β, n-m) = (0, 0, 0)`.
#[derive(Clone, Copy, Debug)]
pub struct Calibration {
    pub prefactor: Prefactor,
    /// `|P·(I₁+I₂) - quadrature|` for the chosen `P`.
    pub residual: f64,
    /// Same for the rejected candidate.
    pub rejected_residual: f64,
}

/// Picks whichever of `A`, `A²` makes `P·(I₁ + I₂)` reproduce the quadrature
/// value of `⟨0,0|0,0⟩`.
pub fn calibrate_prefactor(spec: &QuadratureSpec) -> Result<Calibration> {
    let vac = StateLabel::vacuum();
    let reference = overlap_quadrature(&vac, &vac, spec)?.value;
    let sum = overlap_i1(0.0, 0.0, 0)? + overlap_i2(0.0, 0.0, 0)?;
    let miss = |p: Prefactor| (sum * p.value() - reference).norm();
    let (ra, ra2) = (miss(Prefactor::A), miss(Prefactor::ASquared));
    Ok(if ra2 <= ra {
        Calibration {
            prefactor: Prefactor::ASquared,
            residual: ra2,
            rejected_residual: ra,
        }
    } else {
        Calibration {
            prefactor: Prefactor::A,
            residual: ra,
            rejected_residual: ra2,
        }
    })
}
