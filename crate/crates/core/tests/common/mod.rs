//! Shared test oracles.
//!
//! `erf_oracle` sums the Maclaurin series of erf in complex fixed-point
//! arithmetic on big integers. The working precision grows with |z|² so the
//! cancellation between the huge alternating terms never reaches the bits
//! that survive into the f64 result.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Shifts right, rounding toward zero (`>>` floors negative values).
fn shr(x: &BigInt, bits: u64) -> BigInt {
    if x.is_negative() {
        -((-x) >> bits)
    } else {
        x >> bits
    }
}

fn from_f64(x: f64, bits: u64) -> BigInt {
    assert!(x.is_finite());
    if x == 0.0 {
        return BigInt::zero();
    }
    let raw = x.abs().to_bits();
    let biased = ((raw >> 52) & 0x7ff) as i64;
    let frac = raw & ((1u64 << 52) - 1);
    let (mant, exp) = if biased == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), biased - 1075)
    };
    let shift = exp + bits as i64;
    let m = BigInt::from(mant);
    let v = if shift >= 0 {
        m << shift as u64
    } else {
        m >> (-shift) as u64
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

pub fn to_f64(x: &BigInt, bits: u64) -> f64 {
    // Keep 80 fractional bits, enough for a correctly rounded double
    // whenever |x| is not astronomically small.
    const KEEP: u64 = 80;
    assert!(bits >= KEEP);
    shr(x, bits - KEEP).to_f64().unwrap() * (-(KEEP as f64)).exp2()
}

/// arctan(1/x) scaled by 2^bits.
fn atan_inv(x: u64, bits: u64) -> BigInt {
    let x2 = BigInt::from(x * x);
    let mut term = (BigInt::one() << bits) / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !term.is_zero() {
        let t = &term / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += t;
        } else {
            sum -= t;
        }
        term /= &x2;
        k += 1;
    }
    sum
}

/// π scaled by 2^bits (Machin's formula).
pub fn pi_fixed(bits: u64) -> BigInt {
    let guard = 32;
    let w = bits + guard;
    let pi = atan_inv(5, w) * 16 - atan_inv(239, w) * 4;
    pi >> guard
}

/// 2/√π scaled by 2^bits.
fn two_over_sqrt_pi(bits: u64) -> BigInt {
    let sqrt_pi = (pi_fixed(bits) << bits).sqrt();
    (BigInt::from(2) << (2 * bits)) / sqrt_pi
}

/// erf(x + iy) from the Maclaurin series, returned as (re, im).
pub fn erf_oracle(x: f64, y: f64) -> (f64, f64) {
    let r2 = x * x + y * y;
    // Largest term is about exp(|z|²); carry 160 bits below the result.
    let bits = 160 + (r2 * std::f64::consts::LOG2_E).ceil() as u64 + 64;
    let zr = from_f64(x, bits);
    let zi = from_f64(y, bits);
    let z2r = shr(&(&zr * &zr - &zi * &zi), bits);
    let z2i = shr(&(BigInt::from(2) * &zr * &zi), bits);

    let (mut tr, mut ti) = (zr.clone(), zi.clone());
    let (mut sr, mut si) = (zr, zi);
    let mut n = 1u64;
    loop {
        let nr = shr(&(&tr * &z2r - &ti * &z2i), bits);
        let ni = shr(&(&tr * &z2i + &ti * &z2r), bits);
        let dn = BigInt::from(n);
        tr = nr / &dn;
        ti = ni / &dn;
        let odd = BigInt::from(2 * n + 1);
        let (ur, ui) = (&tr / &odd, &ti / &odd);
        if n % 2 == 1 {
            sr -= ur;
            si -= ui;
        } else {
            sr += ur;
            si += ui;
        }
        if (n as f64) > r2 && tr.is_zero() && ti.is_zero() {
            break;
        }
        n += 1;
    }
    let c = two_over_sqrt_pi(bits);
    (
        to_f64(&shr(&(sr * &c), bits), bits),
        to_f64(&shr(&(si * &c), bits), bits),
    )
}
