//! The arcsine-type family `f_c(x) = α_c (1/4 − x²)^{−c}` on `[-1/2, 1/2]`.
//!
//! With `ν = 1/2 − c` and `A_c = π^c Γ(2−2c) / (2 Γ(1−c))`, the period-two
//! coefficients are `F̂_c(k) = A_c J_ν(πk/2) / k^ν` for `k ≠ 0`, so
//!
//! ```text
//! ‖f_c ∗ f_c‖₂² = 1/2 + 16 A_c⁴ Σ_{k≥1} J_ν⁴(πk/2) / k^{2−4c}.
//! ```
//!
//! Terms decay like `k^{−(4−4c)}`, so reaching a tail of `10⁻⁸` near
//! `c = 1/2` takes tens of millions of terms.

pub mod bessel;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub use bessel::{bessel_j, bessel_j_asymptotic, bessel_j_integral, bessel_j_series, Z_SWITCH};

use crate::error::{Error, Result};
use crate::numeric::{golden_section_min, par_sum, Accumulation};
use crate::special::gamma;

/// Exclusive upper end of the supported exponent range.
pub const C_MAX: f64 = 0.75;

/// Truncation used inside [`optimize_c`] when none is given.
pub const OPTIMIZE_K: usize = 2_000_000;

/// Tail target used when a caller asks for an automatic `K`.
pub const DEFAULT_TAIL_TARGET: f64 = 5e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub c: f64,
    /// normalization `Γ(2−2c)/Γ²(1−c)`
    pub alpha_c: f64,
    /// Bessel order `1/2 − c`
    pub nu: f64,
    /// series truncation
    pub k: usize,
}

impl FamilyParams {
    pub fn new(c: f64, k: usize) -> Result<Self> {
        check_c(c)?;
        if k < 10 {
            return Err(Error::invalid("K", k, "need at least 10 terms"));
        }
        let g = gamma(1.0 - c);
        Ok(Self { c, alpha_c: gamma(2.0 - 2.0 * c) / (g * g), nu: 0.5 - c, k })
    }

    /// `A_c = π^c Γ(2−2c) / (2 Γ(1−c))`
    pub fn amplitude(&self) -> f64 {
        PI.powf(self.c) * gamma(2.0 - 2.0 * self.c) / (2.0 * gamma(1.0 - self.c))
    }

    /// Density `f_c(x)` on `(-1/2, 1/2)`.
    pub fn density(&self, x: f64) -> f64 {
        self.alpha_c * (0.25 - x * x).powf(-self.c)
    }

    /// `F̂_c(k)`, the coefficients of the period-two zero extension.
    pub fn coefficient(&self, k: u64) -> f64 {
        if k == 0 {
            return 0.5;
        }
        self.amplitude() * bessel::j_at_half_pi_multiple(self.nu, k) / (k as f64).powf(self.nu)
    }
}

fn check_c(c: f64) -> Result<()> {
    if !(0.0..C_MAX).contains(&c) {
        return Err(Error::invalid("c", c, "family exponent must lie in [0, 0.75)"));
    }
    Ok(())
}

/// `16 A_c⁴ (16/π⁴) K^{−(3−4c)}/(3−4c)`, from `|J_ν(z)| ≤ √(2/(πz))` for
/// `|ν| ≤ 1/2`.
fn tail_bound(params: &FamilyParams) -> f64 {
    let a = params.amplitude();
    let p = 3.0 - 4.0 * params.c;
    16.0 * a.powi(4) * 16.0 / PI.powi(4) * (params.k as f64).powf(-p) / p
}

/// Smallest `K` whose tail bound is at most `target`.
pub fn terms_for_tail(c: f64, target: f64) -> Result<usize> {
    check_c(c)?;
    if !(target > 0.0) {
        return Err(Error::invalid("tail target", target, "must be positive"));
    }
    let mut p = FamilyParams::new(c, 10)?;
    let scale = tail_bound(&p) * 10f64.powf(3.0 - 4.0 * c);
    let k = (scale / target).powf(1.0 / (3.0 - 4.0 * c)).ceil();
    if !(k < 1e12) {
        return Err(Error::invalid("tail target", target, "needs more than 1e12 terms"));
    }
    p.k = (k as usize).max(10);
    while tail_bound(&p) > target {
        p.k += 1;
    }
    Ok(p.k)
}

/// `‖f_c ∗ f_c‖₂²` summed to `K` terms, with a bound on the remainder.
///
/// Returns `(value, tail)`; `value + tail` bounds the full series from above.
pub fn family_norm(c: f64, k: usize) -> Result<(f64, f64)> {
    let p = FamilyParams::new(c, k)?;
    let a4 = 16.0 * p.amplitude().powi(4);
    let expo = 2.0 - 4.0 * c;
    let sum = par_sum(1, k + 1, Accumulation::Compensated, |j| {
        let jv = bessel::j_at_half_pi_multiple(p.nu, j as u64);
        jv.powi(4) / (j as f64).powf(expo)
    });
    Ok((0.5 + a4 * sum, tail_bound(&p)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyPoint {
    pub c: f64,
    pub value: f64,
    pub tail: f64,
}

/// `steps` evenly spaced evaluations over `[c_min, c_max]` (one at `c_min`
/// if `steps == 1`).
pub fn family_scan(c_min: f64, c_max: f64, steps: usize, k: usize) -> Result<Vec<FamilyPoint>> {
    check_c(c_min)?;
    check_c(c_max)?;
    if steps == 0 || c_max < c_min {
        return Err(Error::invalid(
            "scan",
            format!("[{c_min}, {c_max}] x {steps}"),
            "need c_min ≤ c_max and steps ≥ 1",
        ));
    }
    (0..steps)
        .map(|i| {
            let c = if steps == 1 { c_min } else { c_min + (c_max - c_min) * i as f64 / (steps - 1) as f64 };
            let (value, tail) = family_norm(c, k)?;
            Ok(FamilyPoint { c, value, tail })
        })
        .collect()
}

/// Number of strict interior local minima of a sampled curve.
pub fn local_minima(values: &[f64]) -> usize {
    values.windows(3).filter(|w| w[1] < w[0] && w[1] < w[2]).count()
}

/// Minimizes the family norm over `[lo, hi]` by golden-section search with
/// tolerance `1e−5` in `c`.
pub fn optimize_c(interval: (f64, f64), k: usize) -> Result<(f64, f64)> {
    let (lo, hi) = interval;
    check_c(lo)?;
    check_c(hi)?;
    if !(lo < hi) {
        return Err(Error::invalid("c interval", format!("({lo}, {hi})"), "need lo < hi"));
    }
    FamilyParams::new(lo, k)?;
    let r = golden_section_min(|c| family_norm(c, k).map_or(f64::INFINITY, |v| v.0), lo, hi, 1e-5);
    Ok((r.x, r.value))
}
