//! Independent real-space oracles shared by the integration tests.
#![allow(dead_code)]

use autoconv::numeric::quadrature::{gauss_legendre, integrate};
use autoconv::FourierCoefficients;
use rand::Rng;

/// Gauss–Legendre rule mapped to `[a, b]`.
pub struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Rule {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        Self { nodes, weights }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let h = 0.5 * (b - a);
        let c = 0.5 * (a + b);
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(c + h * x)).sum::<f64>() * h
    }
}

/// `(f∗f)(x)` by direct quadrature over the overlap of the supports.
pub fn convolution_by_quadrature(f: &FourierCoefficients, rule: &Rule, x: f64) -> f64 {
    let lo = (x - 0.5).max(-0.5);
    let hi = (x + 0.5).min(0.5);
    if hi <= lo {
        return 0.0;
    }
    rule.integrate(|t| f.eval(t) * f.eval(x - t), lo, hi)
}

/// `∫_{−1}^{1} (f∗f)²` by nested quadrature; `f∗f` is even and has a kink
/// at the origin, so the outer integral runs over `[0, 1]` and is doubled.
pub fn l2_norm_squared_by_quadrature(f: &FourierCoefficients) -> f64 {
    let rule = Rule::new(200);
    let r = integrate(
        |x| {
            let v = convolution_by_quadrature(f, &rule, x);
            v * v
        },
        0.0,
        1.0,
        1e-13,
        1e-13,
        4000,
    );
    2.0 * r.value
}

/// `(1/2) ∫_{−1}^{1} F(x) cos(πmx) dx`, the period-two coefficient of the
/// zero extension, by quadrature.
pub fn period_two_coefficient_by_quadrature(f: &FourierCoefficients, m: i64) -> f64 {
    let w = std::f64::consts::PI * m as f64;
    let r = integrate(|x| f.eval(x) * (w * x).cos(), -0.5, 0.5, 1e-14, 1e-14, 4000);
    0.5 * r.value
}

/// Random coefficients with `|f_k| ≤ bound`.
pub fn random_coefficients<R: Rng>(rng: &mut R, t: usize, bound: f64) -> FourierCoefficients {
    FourierCoefficients::new((0..t).map(|_| rng.random_range(-bound..=bound)).collect()).unwrap()
}

pub fn published_prefix() -> FourierCoefficients {
    FourierCoefficients::new(autoconv::reference::PUBLISHED_PREFIX.to_vec()).unwrap()
}
