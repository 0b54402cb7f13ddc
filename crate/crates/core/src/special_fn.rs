//! Error function of a complex argument.
//!
//! `erf(z)` is evaluated in the closed first quadrant and mapped to the rest
//! of the plane through `erf(-z) = -erf(z)` and `erf(conj z) = conj erf(z)`,
//! so both symmetries hold bit for bit. Inside the first quadrant three
//! regimes are used, all carried out in double-double arithmetic:
//!
//! * `Im z ≥ Re z` and `Re z ≤ 4`: Maclaurin series. Its terms grow to
//!   about `exp(|z|²)` while the result is of size `exp(Im² - Re²)`, so the
//!   loss of significance is bounded by `exp(2·Re²)` here.
//! * `Im z ≤ 4` with `Im z < Re z`: the series
//!   `erf z = 2/√π · exp(-z²) · Σ 2ᵏ z²ᵏ⁺¹ / (2k+1)!!`, whose cancellation
//!   is bounded by `exp(2·Im²)`.
//! * both parts above 4: Laplace continued fraction for `erfc`, 80 levels
//!   evaluated bottom-up, and `erf = 1 - erfc`.

use crate::dd::{CDd, Dd};
use crate::{ComplexValue, Error, Result};

/// Largest `|Re z|` and `|Im z|` accepted by [`erf_complex`].
pub const CERTIFIED_BOX: f64 = 12.0;

const SERIES_SWITCH: f64 = 4.0;
const CONTINUED_FRACTION_DEPTH: u32 = 80;
const SERIES_REL_CUTOFF: f64 = 1e-34;
const MAX_SERIES_TERMS: u32 = 4000;

/// `erf(z)` for `|Re z| ≤ 12`, `|Im z| ≤ 12`.
pub fn erf_complex(z: ComplexValue) -> Result<ComplexValue> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain(format!("erf of non-finite argument {z}")));
    }
    if z.re.abs() > CERTIFIED_BOX || z.im.abs() > CERTIFIED_BOX {
        return Err(Error::domain(format!(
            "erf argument {z} outside the certified box |Re|, |Im| ≤ {CERTIFIED_BOX}"
        )));
    }
    Ok(erf_unchecked(z))
}

/// [`erf_complex`] without the argument checks.
pub(crate) fn erf_unchecked(z: ComplexValue) -> ComplexValue {
    let (x, y) = (z.re.abs(), z.im.abs());
    let (mut re, mut im) = erf_first_quadrant(x, y);
    if y == 0.0 {
        im = 0.0;
    }
    if x == 0.0 {
        re = 0.0;
    }
    if z.re.is_sign_negative() {
        re = -re;
    }
    if z.im.is_sign_negative() {
        im = -im;
    }
    ComplexValue::new(re, im)
}

/// Real error function, the real-axis restriction of [`erf_complex`].
pub fn erf_real(x: f64) -> Result<f64> {
    erf_complex(ComplexValue::new(x, 0.0)).map(|w| w.re)
}

fn erf_first_quadrant(x: f64, y: f64) -> (f64, f64) {
    if x == 0.0 && y == 0.0 {
        return (0.0, 0.0);
    }
    let z = CDd::new(x, y);
    let w = if y >= x && x <= SERIES_SWITCH {
        maclaurin(z, x * x + y * y)
    } else if y < x && y <= SERIES_SWITCH {
        scaled_series(z, x * x + y * y)
    } else {
        one_minus_erfc(z)
    };
    w.to_f64()
}

/// `2/√π Σ (-1)ᵏ z²ᵏ⁺¹ / (k! (2k+1))`
fn maclaurin(z: CDd, abs_sq: f64) -> CDd {
    let neg_z2 = -(z * z);
    let mut term = z;
    let mut sum = z;
    for k in 1..MAX_SERIES_TERMS {
        let kf = k as f64;
        term = (term * neg_z2).div_f64(kf);
        let contrib = term.div_f64(2.0 * kf + 1.0);
        sum = sum + contrib;
        if kf > abs_sq && series_converged(contrib, sum) {
            break;
        }
    }
    sum.scale(Dd::TWO_OVER_SQRT_PI)
}

/// `2/√π · exp(-z²) · Σ 2ᵏ z²ᵏ⁺¹ / (2k+1)!!`
fn scaled_series(z: CDd, abs_sq: f64) -> CDd {
    let z2 = z * z;
    let two_z2 = CDd {
        re: z2.re.mul_f64(2.0),
        im: z2.im.mul_f64(2.0),
    };
    let mut term = z;
    let mut sum = z;
    for k in 1..MAX_SERIES_TERMS {
        let kf = k as f64;
        term = (term * two_z2).div_f64(2.0 * kf + 1.0);
        sum = sum + term;
        if kf > 2.0 * abs_sq && series_converged(term, sum) {
            break;
        }
    }
    ((-z2).exp() * sum).scale(Dd::TWO_OVER_SQRT_PI)
}

/// `1 - erfc(z)` with `erfc(z) = exp(-z²)/√π · 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + …))))`.
fn one_minus_erfc(z: CDd) -> CDd {
    let mut t = z;
    for n in (1..=CONTINUED_FRACTION_DEPTH).rev() {
        let partial = t.recip();
        t = z + partial.scale(Dd::new(n as f64 * 0.5));
    }
    let erfc = ((-(z * z)).exp() * t.recip()).scale(Dd::ONE_OVER_SQRT_PI);
    CDd {
        re: Dd::ONE - erfc.re,
        im: -erfc.im,
    }
}

#[inline]
fn series_converged(contrib: CDd, sum: CDd) -> bool {
    let c = contrib.approx_abs();
    c <= SERIES_REL_CUTOFF * sum.approx_abs() || c < 1e-300
}
