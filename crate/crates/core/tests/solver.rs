mod common;

use std::f64::consts::PI;

use autoconv::solver::{solve, warm_start_extend, Init, SolverConfig, StopReason};
use autoconv::spectral::objective;
use autoconv::FourierCoefficients;
use common::published_prefix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const R: usize = 4000;

/// Degree-one objective as an explicit quartic `1/2 + x⁴ + (16/π⁴) Σ (a_m + b_m x)⁴`.
struct Quartic {
    c: [f64; 5],
}

impl Quartic {
    fn new(r: usize) -> Self {
        let mut c = [0.5, 0.0, 0.0, 0.0, 1.0];
        let s = 16.0 / PI.powi(4);
        for m in 1..=r {
            let q = (2 * m - 1) as f64;
            let a = 1.0 / q;
            let b = -2.0 * q / (q * q - 4.0);
            c[0] += s * a.powi(4);
            c[1] += s * 4.0 * a.powi(3) * b;
            c[2] += s * 6.0 * a * a * b * b;
            c[3] += s * 4.0 * a * b.powi(3);
            c[4] += s * b.powi(4);
        }
        Self { c }
    }

    fn value(&self, x: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    fn derivative(&self, x: f64) -> f64 {
        self.c[1] + x * (2.0 * self.c[2] + x * (3.0 * self.c[3] + x * 4.0 * self.c[4]))
    }
}

#[test]
fn degree_one_matches_golden_section_scan() {
    let q = Quartic::new(R);
    // golden-section scan over [−1, 1], then bisection on the derivative
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (-1.0, 1.0);
    while b - a > 1e-6 {
        let x1 = b - phi * (b - a);
        let x2 = a + phi * (b - a);
        if q.value(x1) < q.value(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    let (mut lo, mut hi) = (a - 1e-5, b + 1e-5);
    assert!(q.derivative(lo) < 0.0 && q.derivative(hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if q.derivative(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x_star = 0.5 * (lo + hi);

    let sol = solve(&SolverConfig::new(1, R)).unwrap();
    assert!(sol.converged);
    let x = sol.coeffs.values()[0];
    assert!((x - x_star).abs() < 1e-8, "{x} vs {x_star}");
    assert!((sol.breakdown.total - q.value(x_star)).abs() < 1e-12);
}

#[test]
fn degree_zero_is_the_box() {
    let sol = solve(&SolverConfig::new(0, 1000)).unwrap();
    assert_eq!(sol.stop_reason, StopReason::NoFreeVariables);
    let tail: f64 = (1001..2_000_000).map(|m: usize| ((2 * m - 1) as f64).powi(-4)).sum::<f64>() * 16.0 / PI.powi(4);
    assert!((sol.breakdown.total + tail - 2.0 / 3.0).abs() < 1e-15);
}

#[test]
fn degree_twenty_beats_published_prefix_prefix() {
    let sol = solve(&SolverConfig::new(20, R)).unwrap();
    assert!(sol.converged);
    let reference = objective(&published_prefix(), R).unwrap().total;
    assert!(sol.breakdown.total <= reference, "{} vs {reference}", sol.breakdown.total);
    // recomputable bit for bit
    assert_eq!(objective(&sol.coeffs, R).unwrap(), sol.breakdown);
    for (k, v) in sol.coeffs.values().iter().enumerate() {
        let expected = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
        assert_eq!(v.signum(), expected, "k={}", k + 1);
    }
}

#[test]
fn converged_point_is_a_global_minimum() {
    let sol = solve(&SolverConfig::new(20, R)).unwrap();
    let base = sol.breakdown.total;
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let d: Vec<f64> = (0..20).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
        let v: Vec<f64> = sol.coeffs.values().iter().zip(&d).map(|(c, x)| c + 1e-4 * x / norm).collect();
        let o = objective(&FourierCoefficients::new(v).unwrap(), R).unwrap().total;
        assert!(o >= base - 1e-10);
    }
}

#[test]
fn warm_start_saves_iterations() {
    let t20 = solve(&SolverConfig::new(20, R)).unwrap();
    let init = warm_start_extend(&t20, 40).unwrap();
    assert_eq!(&init[..20], t20.coeffs.values());
    assert!(init[20..].iter().all(|&v| v == 0.0));
    let cold = solve(&SolverConfig::new(40, R)).unwrap();
    let warm = solve(&SolverConfig::new(40, R).with_init(Init::WarmStart(t20))).unwrap();
    assert!(cold.converged && warm.converged);
    assert!(warm.iterations < cold.iterations, "{} vs {}", warm.iterations, cold.iterations);
    assert!((warm.breakdown.total - cold.breakdown.total).abs() < 1e-10);
}

#[test]
fn monotone_in_degree() {
    let mut prev = f64::INFINITY;
    for t in [1, 5, 10, 20, 40] {
        let sol = solve(&SolverConfig::new(t, R)).unwrap();
        assert!(sol.breakdown.total <= prev + 1e-10, "T={t}");
        prev = sol.breakdown.total;
    }
}

#[test]
fn objective_monotone_in_truncation_for_fixed_coefficients() {
    let f = published_prefix();
    let mut prev = 0.0;
    for r in [1, 10, 100, 1000, 4000, 10000] {
        let total = objective(&f, r).unwrap().total;
        assert!(total >= prev, "R={r}");
        prev = total;
    }
}

#[test]
fn convergence_envelope() {
    for r in [100usize, 400, 1600] {
        let t = (r as f64).sqrt().ceil() as usize;
        let sol = solve(&SolverConfig::new(t, r)).unwrap();
        assert!((sol.breakdown.total - 0.5746).abs() < 10.0 * (r as f64).powf(-1.0 / 6.0), "R={r}");
    }
}

#[test]
fn convergence_flag_is_honest() {
    let cfg = SolverConfig::new(30, R);
    let sol = solve(&cfg).unwrap();
    assert!(sol.converged);
    match sol.stop_reason {
        StopReason::GradientTolerance => assert!(sol.grad_norm <= cfg.grad_tol),
        StopReason::ObjectiveStalled | StopReason::LineSearchStalled => {}
        other => panic!("unexpected stop reason {other:?}"),
    }
}
