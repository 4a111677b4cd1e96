//! Gamma function by the Lanczos approximation.

use std::f64::consts::PI;

/// Lanczos parameter `g = 607/128` with Godfrey's 15-term coefficients.
const LANCZOS_G: f64 = 607.0 / 128.0;

const LANCZOS_C: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_048_8e-4,
    2.174_396_181_152_126_5e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_140_8e-5,
    3.689_918_265_953_162_5e-6,
];

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// `Γ(x + 1)` for `x ≥ −1/2`.
fn lanczos(x: f64) -> f64 {
    let mut a = LANCZOS_C[0];
    for (k, c) in LANCZOS_C.iter().enumerate().skip(1) {
        a += c / (x + k as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    SQRT_2PI * t.powf(x + 0.5) * (-t).exp() * a
}

/// Γ(x) for real `x` (poles at non-positive integers return ±∞ or NaN).
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    if x >= 20.0 {
        return lanczos(x - 1.0);
    }
    // shift into [0.5, 1.5), where the power term is well conditioned
    let mut y = x;
    let mut scale = 1.0;
    while y >= 1.5 {
        y -= 1.0;
        scale *= y;
    }
    scale * lanczos(y - 1.0)
}

/// ln Γ(x) for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x)
    } else if x < 20.0 {
        gamma(x).ln()
    } else {
        let y = x - 1.0;
        let mut a = LANCZOS_C[0];
        for (k, c) in LANCZOS_C.iter().enumerate().skip(1) {
            a += c / (y + k as f64);
        }
        let t = y + LANCZOS_G + 0.5;
        SQRT_2PI.ln() + (y + 0.5) * t.ln() - t + a.ln()
    }
}
