//! Discrete consequences of a lower bound on `μ₂²`.
//!
//! For real weights `H` on `{1..N}` with `Σ H = N`, the additive energy
//! `Σ_{a+b=c+d} H(a)H(b)H(c)H(d) = Σ_x (H∗H)(x)²` is at least `μ₂² N³`: the
//! step function `f = Σ_j H(j) 𝟙((j−1)/N, j/N]` has unit mass, `f∗f` is
//! piecewise linear with `N·(f∗f)((j−1)/N) = (H∗H)(j)`, and convexity of the
//! square on each segment gives `∫(f∗f)² ≤ N⁻³ Σ (H∗H)²`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::quadrature::gauss_legendre;
use crate::numeric::Neumaier;
use crate::reference::MU2_SQUARED_LOWER;

/// Real weights `H(1..N)` normalized to `Σ H = N`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSequence {
    values: Vec<f64>,
}

impl WeightSequence {
    /// Rescales `values` so they sum to their length.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("N", 0, "need at least one weight"));
        }
        if let Some((i, &v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteCoefficient { index: i + 1, value: v });
        }
        let sum: Neumaier = values.iter().copied().collect();
        let sum = sum.value();
        let abs: f64 = values.iter().map(|v| v.abs()).sum();
        if !(sum.abs() > 1e-12 * abs) {
            return Err(Error::DegenerateWeights(sum));
        }
        let n = values.len() as f64;
        if sum == n {
            return Ok(Self { values });
        }
        // dividing last keeps a single weight exactly equal to N
        Ok(Self { values: values.into_iter().map(|v| v * n / sum).collect() })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1.0; n])
    }

    /// All mass on the first point.
    pub fn point_mass(n: usize) -> Result<Self> {
        let mut v = vec![0.0; n];
        if let Some(first) = v.first_mut() {
            *first = n as f64;
        }
        Self::new(v)
    }

    /// Independent uniform `[0, 1)` weights, renormalized.
    pub fn random_nonnegative<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        loop {
            let v: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            match Self::new(v) {
                Err(Error::DegenerateWeights(_)) => continue,
                other => return other,
            }
        }
    }

    /// Independent uniform `[−1, 2)` weights, renormalized.
    pub fn random_signed<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        loop {
            let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..2.0)).collect();
            let sum: f64 = v.iter().sum();
            // avoid blowing tiny sums up into huge weights
            if sum.abs() < 0.05 * n as f64 {
                continue;
            }
            return Self::new(v);
        }
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// `(H∗H)(x)` for `x = 2..=2N`, returned in index order starting at `x = 2`.
pub fn self_convolution(h: &WeightSequence) -> Vec<f64> {
    let v = h.values();
    let n = v.len();
    (0..2 * n - 1)
        .into_par_iter()
        .map(|s| {
            let lo = s.saturating_sub(n - 1);
            let hi = s.min(n - 1);
            let mut acc = Neumaier::new();
            for a in lo..=hi {
                acc.add(v[a] * v[s - a]);
            }
            acc.value()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub n: usize,
    /// `Σ_x (H∗H)(x)²`
    pub energy: f64,
    /// `μ₂² N³`
    pub bound: f64,
    pub ratio: f64,
}

/// Additive energy against the published certified constant.
pub fn additive_energy(h: &WeightSequence) -> EnergyReport {
    additive_energy_against(h, MU2_SQUARED_LOWER)
}

/// Additive energy compared with `mu2 · N³`.
pub fn additive_energy_against(h: &WeightSequence, mu2: f64) -> EnergyReport {
    let conv = self_convolution(h);
    let energy = conv.iter().map(|c| c * c).collect::<Neumaier>().value();
    let n = h.n();
    let bound = mu2 * (n as f64).powi(3);
    EnergyReport { n, energy, bound, ratio: energy / bound }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepEmbedding {
    /// `∫₀² (f∗f)²` for the step function built from `H`
    pub integral: f64,
    /// `N⁻³ Σ (H∗H)²`
    pub discrete_side: f64,
}

/// Both sides of `∫(f∗f)² ≤ N⁻³ Σ (H∗H)²`.
///
/// `f∗f` is linear on each `[i/N, (i+1)/N]`; its square is integrated with
/// a `quadrature_points`-node Gauss–Legendre rule per segment, which is exact
/// from two nodes up.
pub fn step_embedding(h: &WeightSequence, quadrature_points: usize) -> Result<StepEmbedding> {
    if quadrature_points < 2 {
        return Err(Error::invalid("quadrature_points", quadrature_points, "need at least 2 nodes"));
    }
    let n = h.n();
    let nf = n as f64;
    let conv = self_convolution(h);
    // breakpoint values (f∗f)(i/N) = (H∗H)(i+1)/N for i = 0..=2N
    let mut knots = Vec::with_capacity(2 * n + 1);
    knots.push(0.0);
    knots.extend(conv.iter().map(|c| c / nf));
    knots.push(0.0);
    let (nodes, weights) = gauss_legendre(quadrature_points);
    let mut integral = Neumaier::new();
    for seg in knots.windows(2) {
        let (p, q) = (seg[0], seg[1]);
        for (x, w) in nodes.iter().zip(&weights) {
            let t = 0.5 * (1.0 + x);
            let v = p + (q - p) * t;
            integral.add(0.5 * w * v * v / nf);
        }
    }
    let energy = conv.iter().map(|c| c * c).collect::<Neumaier>().value();
    Ok(StepEmbedding { integral: integral.value(), discrete_side: energy / nf.powi(3) })
}

/// Upper bounds on the normalized densities of `B_h[g]` sets.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaBounds {
    pub mu2_lower: f64,
    /// `σ₂(g) ≤ √((2 − 1/g)/μ₂²)` for `g = 2, 3, 4`
    pub sigma2: [(u32, f64); 3],
    /// `σ₃(1) ≤ (2/μ₂²)^{1/3}`
    pub sigma3_1: f64,
    /// `σ₄(1) ≤ (4/μ₂²)^{1/4}`
    pub sigma4_1: f64,
}

impl SigmaBounds {
    pub fn sigma2(&self, g: u32) -> Option<f64> {
        self.sigma2.iter().find(|(k, _)| *k == g).map(|(_, v)| *v)
    }
}

/// Evaluates the density bounds from a certified lower bound on `μ₂²`.
pub fn sigma_bounds(mu2_lower: f64) -> Result<SigmaBounds> {
    // 1/2 itself is the trivial Cauchy–Schwarz bound and is accepted
    if !(0.5..0.7).contains(&mu2_lower) {
        return Err(Error::invalid("mu2_lower", mu2_lower, "expected a certified lower bound in [0.5, 0.7)"));
    }
    let s2 = |g: u32| (g, ((2.0 - 1.0 / g as f64) / mu2_lower).sqrt());
    Ok(SigmaBounds {
        mu2_lower,
        sigma2: [s2(2), s2(3), s2(4)],
        sigma3_1: (2.0 / mu2_lower).cbrt(),
        sigma4_1: (4.0 / mu2_lower).powf(0.25),
    })
}
