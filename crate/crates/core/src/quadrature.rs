//! Globally adaptive Gauss–Kronrod (7/15) integration with caller-supplied
//! breakpoints.
//!
//! The engine never looks for discontinuities on its own. Integrands built
//! from wrapped Gaussians have kinks at analytically known angles and the
//! caller passes those angles as `split_points`; each resulting panel is then
//! smooth and the 15-point Kronrod rule converges quickly on it.
//!
//! Panels are kept in interval order and the result is summed left to right,
//! so the output does not depend on how many threads evaluated the initial
//! panels.

use rayon::prelude::*;

use crate::{ComplexValue, Error, Result};

// Kronrod abscissae on [-1, 1], descending, centre last. Odd indices are the
// 7-point Gauss abscissae.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Upper bound on the number of live panels, a guard against integrands that
/// never settle below the tolerance.
const MAX_PANELS: usize = 1 << 18;

/// Values the engine can integrate: anything that forms a real vector space
/// with a norm. The norm drives both the error estimate and the stopping
/// test, so for vectors it should bound the error of the quantity the caller
/// ultimately cares about.
pub trait QuadValue: Clone + Send + Sync {
    fn zero_like(&self) -> Self;
    /// `self += weight * other`
    fn add_scaled(&mut self, weight: f64, other: &Self);
    fn norm(&self) -> f64;
    /// Scalar reported in [`Error::ToleranceNotMet`].
    fn summary(&self) -> ComplexValue;
}

impl QuadValue for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn add_scaled(&mut self, weight: f64, other: &Self) {
        *self += weight * other;
    }
    fn norm(&self) -> f64 {
        self.abs()
    }
    fn summary(&self) -> ComplexValue {
        ComplexValue::new(*self, 0.0)
    }
}

impl QuadValue for ComplexValue {
    fn zero_like(&self) -> Self {
        ComplexValue::new(0.0, 0.0)
    }
    fn add_scaled(&mut self, weight: f64, other: &Self) {
        *self += other * weight;
    }
    fn norm(&self) -> f64 {
        ComplexValue::norm(*self)
    }
    fn summary(&self) -> ComplexValue {
        *self
    }
}

/// Component-wise integration; the norm is ℓ¹, so the error bound also
/// covers the sum of the components.
impl QuadValue for Vec<f64> {
    fn zero_like(&self) -> Self {
        vec![0.0; self.len()]
    }
    fn add_scaled(&mut self, weight: f64, other: &Self) {
        debug_assert_eq!(self.len(), other.len());
        for (a, b) in self.iter_mut().zip(other) {
            *a += weight * b;
        }
    }
    fn norm(&self) -> f64 {
        self.iter().map(|x| x.abs()).sum()
    }
    fn summary(&self) -> ComplexValue {
        ComplexValue::new(self.iter().sum(), 0.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of bisections applied to any initial panel.
    pub max_depth: u32,
    split_points: Vec<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_depth: 40,
            split_points: Vec::new(),
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_depth: u32) -> Result<Self> {
        let spec = QuadratureSpec {
            abs_tol,
            rel_tol,
            max_depth,
            split_points: Vec::new(),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Replaces the split points. They are sorted and deduplicated; whether
    /// they lie inside the integration interval is checked by [`integrate`].
    pub fn with_split_points(mut self, mut points: Vec<f64>) -> Self {
        points.sort_by(f64::total_cmp);
        points.dedup();
        self.split_points = points;
        self
    }

    pub fn split_points(&self) -> &[f64] {
        &self.split_points
    }

    pub fn validate(&self) -> Result<()> {
        let tol_ok = |t: f64| t.is_finite() && t > 0.0;
        if !tol_ok(self.abs_tol) || !tol_ok(self.rel_tol) {
            return Err(Error::domain(format!(
                "tolerances must be positive and finite (abs_tol = {:e}, rel_tol = {:e})",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_depth == 0 {
            return Err(Error::domain("max_depth must be at least 1"));
        }
        if self.split_points.iter().any(|p| !p.is_finite()) {
            return Err(Error::domain("split points must be finite"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Integral<V> {
    pub value: V,
    pub err_est: f64,
    /// Number of integrand evaluations.
    pub evaluations: usize,
}

#[derive(Clone)]
struct Panel<V> {
    a: f64,
    b: f64,
    depth: u32,
    value: V,
    err: f64,
    /// The error estimate has hit the rounding floor; bisection cannot help.
    at_floor: bool,
}

/// Integrates `f` over `[a, b]`, first splitting at `spec.split_points()`.
///
/// Succeeds when the summed error estimate is at most
/// `max(abs_tol, rel_tol·‖value‖)`. Fails with [`Error::ToleranceNotMet`]
/// when the worst panel can no longer be bisected (depth limit or rounding
/// floor reached) and with [`Error::Domain`] for a bad interval or spec.
pub fn integrate<V, F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V + Sync,
{
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::domain(format!(
            "integration interval [{a}, {b}] must be finite with a < b"
        )));
    }
    if let Some(p) = spec.split_points.iter().find(|&&p| p <= a || p >= b) {
        return Err(Error::domain(format!(
            "split point {p} is not strictly inside ({a}, {b})"
        )));
    }

    let mut breaks = Vec::with_capacity(spec.split_points.len() + 2);
    breaks.push(a);
    breaks.extend_from_slice(&spec.split_points);
    breaks.push(b);

    let mut panels: Vec<Panel<V>> = breaks
        .par_windows(2)
        .map(|w| kronrod_panel(&f, w[0], w[1], 0))
        .collect();
    let mut evaluations = 15 * panels.len();

    loop {
        let (total, err) = sum_panels(&panels);
        let target = spec.abs_tol.max(spec.rel_tol * total.norm());
        if err <= target {
            return Ok(Integral {
                value: total,
                err_est: err,
                evaluations,
            });
        }

        // Worst panel; ties go to the leftmost so the refinement sequence is
        // deterministic.
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, p)| {
                if p.err > best.1 {
                    (i, p.err)
                } else {
                    best
                }
            });
        let (pa, pb, depth, at_floor) = {
            let p = &panels[worst];
            (p.a, p.b, p.depth, p.at_floor)
        };
        if depth >= spec.max_depth || at_floor || panels.len() >= MAX_PANELS {
            return Err(Error::ToleranceNotMet {
                value: total.summary(),
                err_est: err,
            });
        }
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            return Err(Error::ToleranceNotMet {
                value: total.summary(),
                err_est: err,
            });
        }
        let (left, right) = rayon::join(
            || kronrod_panel(&f, pa, mid, depth + 1),
            || kronrod_panel(&f, mid, pb, depth + 1),
        );
        evaluations += 30;
        panels.splice(worst..=worst, [left, right]);
    }
}

fn sum_panels<V: QuadValue>(panels: &[Panel<V>]) -> (V, f64) {
    let mut total = panels[0].value.zero_like();
    let mut err = 0.0;
    for p in panels {
        total.add_scaled(1.0, &p.value);
        err += p.err;
    }
    (total, err)
}

fn kronrod_panel<V, F>(f: &F, a: f64, b: f64, depth: u32) -> Panel<V>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let f_center = f(center);
    let mut lower = Vec::with_capacity(7);
    let mut upper = Vec::with_capacity(7);
    for x in &XGK[..7] {
        lower.push(f(center - half * x));
        upper.push(f(center + half * x));
    }

    let mut kronrod = f_center.zero_like();
    let mut gauss = f_center.zero_like();
    kronrod.add_scaled(WGK[7], &f_center);
    gauss.add_scaled(WG[3], &f_center);
    let mut res_abs = WGK[7] * f_center.norm();
    for j in 0..7 {
        kronrod.add_scaled(WGK[j], &lower[j]);
        kronrod.add_scaled(WGK[j], &upper[j]);
        res_abs += WGK[j] * (lower[j].norm() + upper[j].norm());
        if j % 2 == 1 {
            gauss.add_scaled(WG[j / 2], &lower[j]);
            gauss.add_scaled(WG[j / 2], &upper[j]);
        }
    }

    // Spread of the integrand about its mean, used to rescale the raw error.
    let mut mean = f_center.zero_like();
    mean.add_scaled(0.5, &kronrod);
    let dev = |v: &V| {
        let mut d = v.clone();
        d.add_scaled(-1.0, &mean);
        d.norm()
    };
    let mut res_asc = WGK[7] * dev(&f_center);
    for j in 0..7 {
        res_asc += WGK[j] * (dev(&lower[j]) + dev(&upper[j]));
    }

    let mut diff = kronrod.clone();
    diff.add_scaled(-1.0, &gauss);
    let raw_err = diff.norm() * half;

    let mut value = kronrod.zero_like();
    value.add_scaled(half, &kronrod);
    let (err, at_floor) = rescale_error(raw_err, res_abs * half, res_asc * half);

    Panel {
        a,
        b,
        depth,
        value,
        err,
        at_floor,
    }
}

/// QUADPACK's empirical sharpening of `|K15 - G7|`, with a rounding floor of
/// `50·ε·∫|f|`.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> (f64, bool) {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && floor >= scaled {
        (floor, true)
    } else {
        (scaled, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_fn::erf_real;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    #[test]
    fn gaussian_over_the_circle_chart() {
        let r = integrate(|x: f64| (-x * x).exp(), -PI, PI, &QuadratureSpec::default()).unwrap();
        let exact = PI.sqrt() * erf_real(PI).unwrap();
        assert!((r.value - exact).abs() < 1e-14);
        assert!(r.err_est <= 1e-12);
    }

    #[test]
    fn constant() {
        let r = integrate(|_| 1.0, 0.0, 2.0, &QuadratureSpec::default()).unwrap();
        assert!((r.value - 2.0).abs() <= 1e-15);
    }

    #[test]
    fn full_period_oscillation_vanishes() {
        let r = integrate(
            |x: f64| c(x.cos(), x.sin()),
            -PI,
            PI,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!(r.value.norm() <= 1e-13);
    }

    #[test]
    fn split_points_handle_a_kink() {
        let spec = QuadratureSpec::default().with_split_points(vec![0.3]);
        let r = integrate(|x: f64| (x - 0.3).abs(), -1.0, 1.0, &spec).unwrap();
        let exact = 0.5 * 1.3 * 1.3 + 0.5 * 0.7 * 0.7;
        assert!((r.value - exact).abs() < 1e-14);
        // One panel per side suffices: the integrand is linear on each.
        assert_eq!(r.evaluations, 30);
    }

    #[test]
    fn vector_values_integrate_componentwise() {
        let r = integrate(
            |x: f64| vec![1.0, x, x * x],
            0.0,
            1.0,
            &QuadratureSpec::default(),
        )
        .unwrap();
        for (got, want) in r.value.iter().zip([1.0, 0.5, 1.0 / 3.0]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn bad_inputs_are_domain_errors() {
        let spec = QuadratureSpec::default();
        assert!(matches!(
            integrate(|_| 1.0, 1.0, 1.0, &spec),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            integrate(|_| 1.0, 2.0, 1.0, &spec),
            Err(Error::Domain(_))
        ));
        let outside = QuadratureSpec::default().with_split_points(vec![1.0]);
        assert!(matches!(
            integrate(|_| 1.0, 0.0, 1.0, &outside),
            Err(Error::Domain(_))
        ));
        assert!(QuadratureSpec::new(0.0, 1e-12, 40).is_err());
        assert!(QuadratureSpec::new(1e-12, f64::NAN, 40).is_err());
        assert!(QuadratureSpec::new(1e-12, 1e-12, 0).is_err());
    }

    #[test]
    fn depth_exhaustion_reports_best_value() {
        // A jump the caller did not announce cannot be resolved in 3 levels.
        let spec = QuadratureSpec::new(1e-14, 1e-14, 3).unwrap();
        match integrate(|x: f64| if x < 0.1 { 0.0 } else { 1.0 }, -1.0, 1.0, &spec) {
            Err(Error::ToleranceNotMet { value, err_est }) => {
                assert!((value.re - 0.9).abs() < 0.05);
                assert!(err_est > 1e-14);
            }
            other => panic!("expected ToleranceNotMet, got {other:?}"),
        }
    }

    #[test]
    fn conjugation_commutes_exactly() {
        let spec = QuadratureSpec::default().with_split_points(vec![-0.5, 1.0]);
        let f = |x: f64| {
            c(
                (x * 1.7).cos() * (-x * x).exp(),
                (x * 3.0).sin() / (1.0 + x * x),
            )
        };
        let r = integrate(f, -PI, PI, &spec).unwrap();
        let rc = integrate(|x| f(x).conj(), -PI, PI, &spec).unwrap();
        assert_eq!(rc.value, r.value.conj());
        assert_eq!(rc.err_est, r.err_est);
    }
}
