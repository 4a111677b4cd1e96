//! Bessel functions of the first kind `J_ν(z)` for real `ν > −1/2`, `z ≥ 0`.
//!
//! Three independent routes:
//! - the ascending series, accumulated in double-double so that the
//!   alternating terms (as large as `~e^z/√z`) cancel cleanly up to `z = 25`;
//! - Hankel's asymptotic expansion, used beyond [`Z_SWITCH`];
//! - the Mehler–Sonine integral evaluated by tanh–sinh quadrature, which is
//!   slow but shares nothing with the other two.

use std::f64::consts::{FRAC_2_PI, PI};

use crate::error::{Error, Result};
use crate::numeric::quadrature::tanh_sinh;
use crate::numeric::DoubleDouble;
use crate::special::gamma;

/// Crossover from the series to the asymptotic expansion.
pub const Z_SWITCH: f64 = 25.0;

fn check_order(nu: f64, z: f64) -> Result<()> {
    if !(nu > -0.5) || !nu.is_finite() {
        return Err(Error::invalid("nu", nu, "Bessel order must exceed -1/2"));
    }
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::invalid("z", z, "argument must be finite and non-negative"));
    }
    Ok(())
}

/// `J_ν(z)`: series for `z ≤ 25`, asymptotic expansion beyond.
pub fn bessel_j(nu: f64, z: f64) -> Result<f64> {
    check_order(nu, z)?;
    Ok(if z <= Z_SWITCH {
        series(nu, z)
    } else {
        asymptotic(nu, z, (z - (0.5 * nu + 0.25) * PI).cos(), (z - (0.5 * nu + 0.25) * PI).sin())
    })
}

/// Ascending series `Σ_j (−1)^j (z/2)^{2j+ν} / (j! Γ(j+ν+1))`.
pub fn bessel_j_series(nu: f64, z: f64) -> Result<f64> {
    check_order(nu, z)?;
    Ok(series(nu, z))
}

/// Hankel's expansion; accurate to rounding level once `z ≳ 20`.
pub fn bessel_j_asymptotic(nu: f64, z: f64) -> Result<f64> {
    check_order(nu, z)?;
    if !(z > 0.0) {
        return Err(Error::invalid("z", z, "asymptotic expansion needs z > 0"));
    }
    let chi = z - (0.5 * nu + 0.25) * PI;
    Ok(asymptotic(nu, z, chi.cos(), chi.sin()))
}

/// Mehler–Sonine integral
/// `(z/2)^ν / (Γ(ν+1/2) √π) ∫_{−1}^{1} cos(zs) (1−s²)^{ν−1/2} ds`.
pub fn bessel_j_integral(nu: f64, z: f64) -> Result<f64> {
    check_order(nu, z)?;
    if z == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    let e = nu - 0.5;
    // symmetric integrand: integrate over [0, 1] and double
    let r = tanh_sinh(|s, _, db| (z * s).cos() * (db * (1.0 + s)).powf(e), 0.0, 1.0, 1e-13);
    Ok(2.0 * r.value * (0.5 * z).powf(nu) / (gamma(nu + 0.5) * PI.sqrt()))
}

fn series(nu: f64, z: f64) -> f64 {
    if z == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    let h = 0.5 * z;
    let q = DoubleDouble::product_of(h, h);
    let mut term = DoubleDouble::ONE;
    let mut sum = DoubleDouble::ONE;
    for j in 1..400 {
        let jf = j as f64;
        let denom = DoubleDouble::sum_of(jf, nu) * jf;
        term = -(term * q / denom);
        sum += term;
        if jf > h && term.hi().abs() < 1e-33 * sum.hi().abs().max(1e-300) {
            break;
        }
    }
    sum.to_f64() * h.powf(nu) / gamma(nu + 1.0)
}

/// Hankel expansion given `cos χ` and `sin χ`, `χ = z − (ν/2 + 1/4)π`.
fn asymptotic(nu: f64, z: f64, cos_chi: f64, sin_chi: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    let inv8z = 1.0 / (8.0 * z);
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a *= (mu - odd * odd) * inv8z / kf;
        let mag = a.abs();
        if mag > prev {
            break;
        }
        // a_k/z^k alternates between Q (odd k) and P (even k), with signs
        // (−1)^{⌊k/2⌋}
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 1 {
            q += sign * a;
        } else {
            p += sign * a;
        }
        if mag < 1e-17 * p.abs().max(1e-300) {
            break;
        }
        prev = mag;
    }
    (FRAC_2_PI / z).sqrt() * (p * cos_chi - q * sin_chi)
}

/// `J_ν(πk/2)` with the phase reduced exactly.
///
/// `χ = π(2k − 2ν − 1)/4`; reducing `k` mod 8 keeps `cos χ` accurate even
/// for `k ~ 10⁸`, where `πk/2` itself carries an absolute error of `~10⁻⁸`.
pub(crate) fn j_at_half_pi_multiple(nu: f64, k: u64) -> f64 {
    let z = 0.5 * PI * k as f64;
    if z <= Z_SWITCH {
        return series(nu, z);
    }
    let r = (k % 8) as f64;
    let chi = 0.25 * PI * (2.0 * r - 2.0 * nu - 1.0);
    asymptotic(nu, z, chi.cos(), chi.sin())
}
