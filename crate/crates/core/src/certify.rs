//! One-sided bounds on `μ₂²` from a candidate solution.
//!
//! The upper bound is `‖f∗f‖₂²` itself: the objective summed over `N` odd
//! channels plus an analytic remainder. The lower bound comes from Hölder
//! duality: with `G = 1` on `[-1/2, 1/2]` and `1 − g` outside, every
//! admissible `f` satisfies `μ₂² ≥ 1/2 + 1/(2 S³)`, `S = Σ_{m≠0} |Ĝ(m)|^{4/3}`.
//! The dual `g` is built from `f` through `ĝ(k) = 2 f_k³ / (1 − 2α)`.
//!
//! Both bounds carry a rounding allowance for their binary64 sums, folded
//! into `tail_budget`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{golden_section_max, par_sum_many, Accumulation, Accumulator, Neumaier};
use crate::spectral::{odd_channel_with_abs, odd_power_tail, FourierCoefficients, ODD_SCALE};

const EPS: f64 = f64::EPSILON;

/// Default search interval for `α`.
pub const DEFAULT_ALPHA_INTERVAL: (f64, f64) = (0.52, 0.65);
pub const ALPHA_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Upper,
    Lower,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub kind: BoundKind,
    pub value: f64,
    /// Upper: the truncated objective. Lower: the truncated dual sum `S_main`.
    pub main_sum: f64,
    pub n: usize,
    /// Analytic remainder plus rounding allowance. Added to the objective
    /// for upper bounds, to `S` for lower bounds.
    pub tail_budget: f64,
    /// part of `tail_budget` that accounts for floating-point rounding
    pub rounding: f64,
    pub inputs_digest: String,
    pub accumulation: Accumulation,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decay_constant: Option<f64>,
}

/// Certified upper bound on `‖f∗f‖₂²` (hence on `μ₂²`).
pub fn upper_bound(f: &FourierCoefficients, n: usize, mode: Accumulation) -> Result<BoundCertificate> {
    let t = f.degree();
    let required = (2 * t).max(1);
    if n < required {
        return Err(Error::TruncationTooSmall { n, required });
    }
    let values = f.values();
    let tf = t as f64;
    let even: Neumaier = values.iter().map(|v| v.powi(4)).collect();
    let even = even.value();
    let [odd, odd_err] = par_sum_many::<2, _>(1, n + 1, mode, |m| {
        let (l, abs) = odd_channel_with_abs(values, m);
        let l4 = l.powi(4);
        let el = 4.0 * EPS * abs + 2.0 * EPS * l.abs() + 2.0 * tf * EPS * EPS * abs;
        [l4, 4.0 * (l.abs() + el).powi(3) * el + 4.0 * EPS * l4]
    });
    let main = 0.5 + even + ODD_SCALE * odd;
    let rounding = ODD_SCALE * (odd_err + Accumulator::relative_error(mode, n) * odd)
        + (4.0 + 2.0 * tf * EPS) * EPS * even
        + 4.0 * EPS * main;
    let c = f.decay_constant();
    // |F̂(m)| ≤ C/m for odd m ≥ 2N+1 ≥ 4T
    let tail = 8.0 / 3.0 * c.powi(4) * ((2 * n - 1) as f64).powi(-3);
    let tail_budget = tail + rounding;
    Ok(BoundCertificate {
        kind: BoundKind::Upper,
        value: (main + tail_budget) * (1.0 + 2.0 * EPS),
        main_sum: main,
        n,
        tail_budget,
        rounding,
        inputs_digest: f.digest(),
        accumulation: mode,
        alpha: None,
        decay_constant: Some(c),
    })
}

/// Spectrum of the Hölder dual built from `f` at a given `α`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualSpectrum {
    pub alpha: f64,
    /// `ĝ(0..=T)`, with `ĝ(0) = 2`
    pub ghat: Vec<f64>,
    /// `Σ_{0<|m|≤2N} |Ĝ(m)|^{4/3}`
    pub s_main: f64,
    /// bound on `Σ_{|m|>2N} |Ĝ(m)|^{4/3}`
    pub s_tail: f64,
    pub rounding: f64,
    /// `s_main + s_tail + rounding`
    pub s: f64,
}

impl DualSpectrum {
    /// `1/2 + 1/(2 S³)`, rounded down.
    pub fn lower_bound_value(&self) -> f64 {
        (0.5 + 0.5 / self.s.powi(3)) * (1.0 - 4.0 * EPS)
    }
}

fn beta(alpha: f64) -> f64 {
    2.0 / (1.0 - 2.0 * alpha)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.5 && alpha < 1.0) {
        return Err(Error::invalid("alpha", alpha, "must lie in (1/2, 1)"));
    }
    Ok(())
}

/// `Ĝ(m)` for the dual at `α`, summed directly over `|k| ≤ T`.
///
/// Odd `m`: `(−1)^{(m+1)/2} Σ_k ĝ(k) (−1)^k / (π(2k − m))`; even `m ≠ 0`:
/// `−ĝ(m/2)/2`; `Ĝ(0) = 0`.
pub fn dual_coefficient(f: &FourierCoefficients, alpha: f64, m: i64) -> Result<f64> {
    check_alpha(alpha)?;
    let b = beta(alpha);
    let ghat = |k: i64| if k == 0 { 2.0 } else { b * f.get(k).powi(3) };
    if m == 0 {
        return Ok(0.0);
    }
    if m % 2 == 0 {
        return Ok(-0.5 * ghat(m / 2));
    }
    let t = f.degree() as i64;
    let mut acc = Neumaier::new();
    for k in -t..=t {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc.add(ghat(k) * sign / (PI * (2 * k - m) as f64));
    }
    let outer = if ((m + 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(outer * acc.value())
}

/// The `α`-independent part of the dual sums for a fixed `f` and `N`.
///
/// For odd `m`, `|Ĝ(m)| = (2/(π|m|)) |1 + β P_m|` with
/// `P_m = Σ_k (−1)^k f_k³ m²/(m² − 4k²)` and `β = 2/(1 − 2α)`; caching `P_m`
/// makes each `α` evaluation linear in `N`.
#[derive(Clone, Debug)]
pub struct DualKernel {
    n: usize,
    cubes: Vec<f64>,
    /// `P_m` for `m = 1, 3, …, 2N − 1`
    p: Vec<f64>,
    /// rounding bound on each `P_m`
    p_err: Vec<f64>,
    alternating_cube_sum: f64,
    k2_abs_cube_sum: f64,
    digest: String,
}

impl DualKernel {
    pub fn new(f: &FourierCoefficients, n: usize) -> Result<Self> {
        let t = f.degree();
        let required = (15 * t).max(1);
        if n < required {
            return Err(Error::TruncationTooSmall { n, required });
        }
        let cubes: Vec<f64> = f.values().iter().map(|v| v.powi(3)).collect();
        let tf = t as f64;
        let pairs: Vec<(f64, f64)> = {
            use rayon::prelude::*;
            (0..n)
                .into_par_iter()
                .map(|j| {
                    let m = (2 * j + 1) as f64;
                    let m2 = m * m;
                    let mut acc = Neumaier::new();
                    let mut abs = Neumaier::new();
                    for (i, &c) in cubes.iter().enumerate() {
                        let k = (i + 1) as f64;
                        let term = c * m2 / (m2 - 4.0 * k * k);
                        let term = if i % 2 == 0 { -term } else { term };
                        acc.add(term);
                        abs.add(term.abs());
                    }
                    let (p, abs) = (acc.value(), abs.value());
                    (p, 5.0 * EPS * abs + 2.0 * EPS * p.abs() + 2.0 * tf * EPS * EPS * abs)
                })
                .collect()
        };
        let (p, p_err) = pairs.into_iter().unzip();
        let stats = f.statistics();
        let alternating: Neumaier = cubes.iter().enumerate().map(|(i, &c)| if i % 2 == 0 { -c } else { c }).collect();
        Ok(Self {
            n,
            cubes,
            p,
            p_err,
            alternating_cube_sum: alternating.value(),
            k2_abs_cube_sum: stats.sum_k2_abs_cubed,
            digest: f.digest(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Constant `D` with `|Ĝ(m)| ≤ D/|m|` for odd `|m| > 2N`.
    pub fn tail_coefficient(&self, alpha: f64) -> f64 {
        let b = beta(alpha);
        let a = (1.0 + b * self.alternating_cube_sum).abs();
        let bb = b.abs() * self.k2_abs_cube_sum;
        // 1/(1 − 4k²/m²) = 1 + θ_k with |θ_k| ≤ 5k²/m² once |m| ≥ 5T
        let first = (2 * self.n + 1) as f64;
        2.0 / PI * (a + 5.0 * bb / (first * first)) * (1.0 + 16.0 * EPS) + 4.0 * EPS
    }

    pub fn spectrum(&self, alpha: f64, mode: Accumulation) -> Result<DualSpectrum> {
        check_alpha(alpha)?;
        let b = beta(alpha);
        let p43 = 4.0 / 3.0;
        let even: Neumaier = self.cubes.iter().map(|c| (0.5 * b * c).abs().powf(p43)).collect();
        let even = even.value();
        let [odd, odd_err] = par_sum_many::<2, _>(0, self.n, mode, |j| {
            let m = (2 * j + 1) as f64;
            let scale = 2.0 / (PI * m);
            let g = scale * (1.0 + b * self.p[j]).abs();
            let eg = scale * (b.abs() * self.p_err[j] + 3.0 * EPS * (1.0 + (b * self.p[j]).abs())) + 3.0 * EPS * g;
            let term = g.powf(p43);
            [term, p43 * (g + eg).cbrt() * eg + 4.0 * EPS * term]
        });
        let s_main = 2.0 * (even + odd);
        let rounding = 2.0 * (odd_err + 8.0 * EPS * even)
            + Accumulator::relative_error(mode, self.n) * s_main
            + 4.0 * EPS * s_main;
        let s_tail = 2.0 * odd_power_tail(self.tail_coefficient(alpha), 2 * self.n + 1, p43);
        let mut ghat = Vec::with_capacity(self.cubes.len() + 1);
        ghat.push(2.0);
        ghat.extend(self.cubes.iter().map(|c| b * c));
        Ok(DualSpectrum { alpha, ghat, s_main, s_tail, rounding, s: s_main + s_tail + rounding })
    }

    pub fn lower_bound(&self, alpha: f64, mode: Accumulation) -> Result<BoundCertificate> {
        let d = self.spectrum(alpha, mode)?;
        Ok(BoundCertificate {
            kind: BoundKind::Lower,
            value: d.lower_bound_value(),
            main_sum: d.s_main,
            n: self.n,
            tail_budget: d.s_tail + d.rounding,
            rounding: d.rounding,
            inputs_digest: self.digest.clone(),
            accumulation: mode,
            alpha: Some(alpha),
            decay_constant: None,
        })
    }
}

/// Spectrum of the dual at `α`, truncated at `|m| ≤ 2N`.
pub fn dual_spectrum(f: &FourierCoefficients, alpha: f64, n: usize) -> Result<DualSpectrum> {
    check_alpha(alpha)?;
    DualKernel::new(f, n)?.spectrum(alpha, Accumulation::Compensated)
}

/// Certified lower bound on `μ₂²`; valid whatever the quality of `f`.
pub fn lower_bound(f: &FourierCoefficients, alpha: f64, n: usize, mode: Accumulation) -> Result<BoundCertificate> {
    check_alpha(alpha)?;
    DualKernel::new(f, n)?.lower_bound(alpha, mode)
}

/// Maximizes the lower bound over `α ∈ [lo, hi]` by golden-section search.
pub fn optimize_alpha(
    f: &FourierCoefficients,
    n: usize,
    interval: (f64, f64),
    mode: Accumulation,
) -> Result<(f64, BoundCertificate)> {
    let (lo, hi) = interval;
    if !(0.5 < lo && lo < hi && hi < 1.0) {
        return Err(Error::invalid("alpha interval", format!("({lo}, {hi})"), "need 1/2 < lo < hi < 1"));
    }
    let kernel = DualKernel::new(f, n)?;
    let best = golden_section_max(
        |a| kernel.spectrum(a, mode).map_or(f64::NEG_INFINITY, |d| d.lower_bound_value()),
        lo,
        hi,
        ALPHA_TOL,
    );
    let cert = kernel.lower_bound(best.x, mode)?;
    Ok((best.x, cert))
}

/// Width of a certified bracket; negative means the bounds are inconsistent.
pub fn sandwich_width(lower: &BoundCertificate, upper: &BoundCertificate) -> f64 {
    upper.value - lower.value
}
