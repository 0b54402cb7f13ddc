//! Acceptance suite. Runs without the libtest harness and prints one
//! PASS/FAIL line per criterion; the process fails if any criterion fails.

mod common;

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use circle_cs::observables::{
    expectation_p2_fourier, expectation_p2_quadrature, expectation_p_quadrature,
    expectation_q_quadrature,
};
use circle_cs::overlaps::calibrate_prefactor;
use circle_cs::special_fn::CERTIFIED_BOX;
use circle_cs::{
    erf_complex, expectation_p, expectation_p2, expectation_q, normalization_constant, overlap,
    overlap_i1, overlap_i2, overlap_quadrature, resolution_check, sample_state, ComplexValue,
    QuadratureSpec, StateLabel, TestVector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn label(m: i64, alpha: f64) -> StateLabel {
    StateLabel::new(m, alpha).unwrap()
}

/// α ∈ {0, π/8, ..., π}
fn eighths() -> Vec<f64> {
    (0..=8).map(|i| PI * i as f64 / 8.0).collect()
}

fn criterion_1() -> Outcome {
    let a = normalization_constant();
    let closed = 1.0 / (PI.sqrt() * libm::erf(PI)).sqrt();
    let printed = (a - 0.751128).abs();
    let exact = (a - closed).abs();
    outcome(
        printed <= 5e-6 && exact <= 1e-12,
        format!("A = {a:.17}, |A - 0.751128| = {printed:.2e}, |A - closed form| = {exact:.2e}"),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let spec = QuadratureSpec::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for v in [
        TestVector::Vacuum,
        TestVector::PlaneWave(5),
        TestVector::TwoPeak,
    ] {
        let eta = v.sample(1024).unwrap();
        let r = resolution_check(&eta, 30, &spec).unwrap();
        let nonneg = r.per_k_terms.iter().all(|&t| t >= 0.0);
        let conv = r.convergence();
        let monotone = conv.windows(2).all(|w| w[1].1 >= w[0].1);
        let defect = (r.estimate - TAU).abs();
        pass &= nonneg && monotone && defect <= 1e-6;
        parts.push(format!("{} defect {defect:.2e}", v.name()));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(60);
    outcome(pass, format!("{} ({:.2?})", parts.join(", "), elapsed))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let spec = QuadratureSpec::default();
    let cal = calibrate_prefactor(&spec).unwrap();
    let p = cal.prefactor.value();
    let a2 = normalization_constant().powi(2);
    let grid: Vec<f64> = (0..=10).map(|i| PI * i as f64 / 10.0).collect();
    let mut worst = 0.0f64;
    for &alpha in &grid {
        for &beta in &grid {
            for dn in -5..=5 {
                let quad = overlap_quadrature(&label(0, alpha), &label(dn, beta), &spec)
                    .unwrap()
                    .value;
                let analytic = if alpha <= beta {
                    (overlap_i1(alpha, beta, dn).unwrap() + overlap_i2(alpha, beta, dn).unwrap())
                        * p
                } else {
                    overlap(&label(0, alpha), &label(dn, beta)).unwrap().value
                };
                worst = worst.max((analytic - quad).norm());
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-9 && (p - a2).abs() <= 1e-15 && elapsed < Duration::from_secs(120),
        format!(
            "prefactor {:?} = {p:.17} (A² = {a2:.17}), calibration residual {:.2e}, worst cell {worst:.2e} ({elapsed:.2?})",
            cal.prefactor, cal.residual
        ),
    )
}

fn criterion_4() -> Outcome {
    let spec = QuadratureSpec::default();
    let a = normalization_constant();
    let seam = a * a * PI * (-PI * PI).exp();
    let (mut p_exact, mut p_oracle, mut p2_formula, mut p2_oracle, mut p2_fourier, mut p2_flat) =
        (true, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for m in -3i64..=3 {
        let expected = (m * m) as f64 + 0.5 + seam;
        let first = expectation_p2(label(m, 0.0));
        for alpha in eighths() {
            let l = label(m, alpha);
            p_exact &= expectation_p(l) == m as f64;
            p_oracle =
                p_oracle.max((expectation_p_quadrature(l, &spec).unwrap() - m as f64).norm());
            let p2 = expectation_p2(l);
            p2_formula = p2_formula.max((p2 - expected).abs());
            p2_oracle = p2_oracle.max((expectation_p2_quadrature(l, &spec).unwrap() - p2).norm());
            p2_fourier = p2_fourier.max((expectation_p2_fourier(l, 4096, 64).unwrap() - p2).abs());
            p2_flat = p2_flat.max((p2 - first).abs());
        }
    }
    let pass = p_exact
        && p_oracle <= 1e-11
        && p2_formula <= 1e-14
        && p2_oracle <= 1e-9
        && p2_fourier <= 1e-9
        && p2_flat <= 1e-11;
    outcome(
        pass,
        format!(
            "<P> = m exact: {p_exact}, <P> oracle {p_oracle:.2e}, <P²> formula {p2_formula:.2e}, \
             <P²> oracle {p2_oracle:.2e}, <P²> Fourier route (n_max 64) {p2_fourier:.2e}, α-spread {p2_flat:.2e}"
        ),
    )
}

fn criterion_5() -> Outcome {
    let spec = QuadratureSpec::default();
    let mut oracle = 0.0f64;
    let mut m_free = true;
    for alpha in eighths()
        .into_iter()
        .chain(eighths().into_iter().map(|a| -a))
    {
        let q = expectation_q(label(0, alpha));
        oracle = oracle.max((expectation_q_quadrature(label(0, alpha), &spec).unwrap() - q).abs());
        for m in -3..=3 {
            m_free &= expectation_q(label(m, alpha)).to_bits() == q.to_bits();
        }
    }
    let at_zero = expectation_q(label(0, 0.0)).abs();
    let at_pi = expectation_q(label(0, PI)).abs();
    outcome(
        oracle <= 1e-11 && at_zero <= 1e-11 && at_pi <= 1e-11 && m_free,
        format!("oracle {oracle:.2e}, |<Q>(0)| = {at_zero:.2e}, |<Q>(π)| = {at_pi:.2e}, m-independent: {m_free}"),
    )
}

fn criterion_6() -> Outcome {
    // An overlap counts as positive only if it clears its own error estimate.
    let mut min = f64::INFINITY;
    let mut at = (0, 0.0, 0.0, 0.0);
    let mut uncertified = Vec::new();
    let mut min_certified = f64::INFINITY;
    for &alpha in &[0.0, PI / 4.0, -PI / 2.0, 2.0] {
        for dn in 0..=5 {
            for gap in eighths() {
                let r = overlap(&label(0, alpha), &label(dn, alpha + gap)).unwrap();
                let v = r.value.norm();
                if v > r.err_est {
                    min_certified = min_certified.min(v);
                } else {
                    uncertified.push(format!("(dn {dn}, β - α = {gap:.4})"));
                }
                if v < min {
                    min = v;
                    at = (dn, alpha, gap, r.err_est);
                }
            }
        }
    }
    uncertified.sort();
    uncertified.dedup();
    outcome(
        uncertified.is_empty(),
        format!(
            "min |overlap| = {min:.6e} (error estimate {:.1e}) at dn = {}, α = {:.4}, β - α = {:.4}; \
             smallest certified value {min_certified:.6e}; not distinguishable from zero: {}",
            at.3,
            at.0,
            at.1,
            at.2,
            if uncertified.is_empty() { "none".to_string() } else { uncertified.join(" ") }
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let r = 4.0 * rng.gen::<f64>().sqrt();
        let t = TAU * rng.gen::<f64>();
        let z = ComplexValue::new(r * t.cos(), r * t.sin());
        let (re, im) = common::erf_oracle(z.re, z.im);
        let want = ComplexValue::new(re, im);
        worst = worst.max((erf_complex(z).unwrap() - want).norm() / want.norm());
    }
    let mut symmetric = true;
    for _ in 0..1000 {
        let z = ComplexValue::new(
            rng.gen_range(-CERTIFIED_BOX..=CERTIFIED_BOX),
            rng.gen_range(-CERTIFIED_BOX..=CERTIFIED_BOX),
        );
        let w = erf_complex(z).unwrap();
        let same = |a: ComplexValue, b: ComplexValue| {
            a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()
        };
        symmetric &=
            same(erf_complex(-z).unwrap(), -w) && same(erf_complex(z.conj()).unwrap(), w.conj());
    }
    outcome(
        worst <= 1e-12 && symmetric,
        format!("worst relative error {worst:.2e} over 1000 points, exact symmetries: {symmetric}"),
    )
}

fn criterion_8() -> Outcome {
    let vac = sample_state(StateLabel::vacuum(), 1024).unwrap();
    let mut worst = 0.0f64;
    for m in -3..=3 {
        for alpha in [0.0, PI / 4.0, -PI / 4.0, PI / 2.0, -PI / 2.0] {
            let phase_after_shift = vac.shifted(alpha).unwrap().with_phase(m);
            let shift_after_phase = vac.with_phase(m).shifted(alpha).unwrap();
            let c = ComplexValue::from_polar(1.0, m as f64 * alpha);
            for (x, y) in phase_after_shift
                .amplitudes()
                .iter()
                .zip(shift_after_phase.amplitudes())
            {
                worst = worst.max((x - c * y).norm());
            }
        }
    }
    outcome(
        worst <= 1e-10,
        format!("worst pointwise deviation {worst:.2e}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("normalization constant", criterion_1),
        ("resolution of unity", criterion_2),
        ("closed-form overlaps vs quadrature", criterion_3),
        ("momentum moments", criterion_4),
        ("position mean", criterion_5),
        ("non-orthogonality", criterion_6),
        ("complex erf", criterion_7),
        ("Weyl relation", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {} [{verdict}] {name}: {}", i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
