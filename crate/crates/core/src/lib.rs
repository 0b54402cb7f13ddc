//! Coherent states on the unit circle with phase space ℤ×S¹.
//!
//! The vacuum is the wrapped Gaussian `A·exp(-φ²/2)` on `[-π, π)` and the
//! family `|m, α⟩` is generated from it by a momentum kick `exp(imφ)` and a
//! rotation by `α` taken modulo 2π. The crate evaluates these states, their
//! overlaps (closed forms built on the complex error function), position and
//! momentum expectation values, and a numerical check of the resolution of
//! unity `Σ_k ∫ |k,α⟩⟨k,α| dα = 2π·I`. Every closed form has a quadrature
//! counterpart built on [`quadrature::integrate`].

mod dd;
mod error;
mod output;

pub mod circle_states;
pub mod cli;
pub mod observables;
pub mod overlaps;
pub mod quadrature;
pub mod special_fn;

pub use circle_states::{
    coherent_eval, fourier_coefficients, normalization_constant, sample_state, vacuum, wrap_angle,
    Angle, FourierCoefficients, SampledWaveFunction, StateLabel,
};
pub use error::{Error, Result};
pub use observables::{
    expectation_p, expectation_p2, expectation_q, momentum_dispersion, resolution_check,
    ResolutionReport, TestVector,
};
pub use overlaps::{overlap, overlap_i1, overlap_i2, overlap_quadrature, Method, OverlapResult};
pub use quadrature::{integrate, Integral, QuadratureSpec};
pub use special_fn::erf_complex;

/// Complex scalar used throughout the crate.
pub type ComplexValue = num_complex::Complex64;
