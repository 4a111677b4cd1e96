//! Fourier-side representation of even unit-mass functions on `[-1/2, 1/2]`.
//!
//! A candidate is `f(x) = 1 + 2 Σ_{k=1..T} f_k cos(2πkx)`. Its zero extension
//! `F` to the period-two circle has coefficients `F̂(m)`: for even `m`,
//! `F̂(2k) = f̂(k)/2`; for odd `m` they are governed by the odd channels
//!
//! ```text
//! L_m = 1/(2m−1) + 2 Σ_k (2m−1) f_k (−1)^k / ((2m−1)² − 4k²),
//! ```
//!
//! via `F̂(2m−1) = (−1)^{m−1} L_m / π`, and
//! `‖f∗f‖₂² = 8 Σ_m F̂(m)⁴ = 1/2 + Σ f_k⁴ + (16/π⁴) Σ_m L_m⁴`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::numeric::{par_sum, Accumulation, Neumaier};

/// Default cap on the number of cached odd-channel weights (`T·R`).
pub const DEFAULT_TABLE_CAP: usize = 200_000_000;

/// Rows of `m` handled by one gradient block.
const GRADIENT_BLOCK: usize = 256;

/// `16/π⁴`
pub(crate) const ODD_SCALE: f64 = 16.0 / (PI * PI * PI * PI);

/// A truncated series value together with an analytic bound on the
/// discarded remainder.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Truncated {
    pub value: f64,
    pub tail: f64,
}

/// Even real trigonometric polynomial with `f̂(0) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierCoefficients {
    values: Vec<f64>,
}

impl FourierCoefficients {
    /// Wraps `f_1..f_T`; rejects non-finite entries (1-based index in the error).
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((i, &v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteCoefficient { index: i + 1, value: v });
        }
        Ok(Self { values })
    }

    /// The box function `f ≡ 1`.
    pub fn constant() -> Self {
        Self { values: Vec::new() }
    }

    pub fn zeros(degree: usize) -> Self {
        Self { values: vec![0.0; degree] }
    }

    /// Truncation degree `T`.
    pub fn degree(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// `f̂(k)`, zero beyond the degree.
    pub fn get(&self, k: i64) -> f64 {
        match k.unsigned_abs() as usize {
            0 => 1.0,
            k if k <= self.values.len() => self.values[k - 1],
            _ => 0.0,
        }
    }

    /// `f(x)` as a trigonometric polynomial (period one).
    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = Neumaier::new();
        acc.add(1.0);
        for (k, &c) in self.values.iter().enumerate() {
            acc.add(2.0 * c * (2.0 * PI * (k + 1) as f64 * x).cos());
        }
        acc.value()
    }

    /// The zero extension `F`: `f` on `[-1/2, 1/2]`, zero elsewhere.
    pub fn eval_extended(&self, x: f64) -> f64 {
        if x.abs() <= 0.5 {
            self.eval(x)
        } else {
            0.0
        }
    }

    /// `Σ_{|k|≤T} |f̂(k)| = 1 + 2 Σ |f_k|`.
    pub fn abs_sum(&self) -> f64 {
        1.0 + 2.0 * self.values.iter().map(|v| v.abs()).collect::<Neumaier>().value()
    }

    /// Constant `C` with `|F̂(m)| ≤ C/|m|` for odd `|m| ≥ 4T`.
    pub fn decay_constant(&self) -> f64 {
        2.0 / PI * self.abs_sum()
    }

    /// Summary statistics that drive the decay constants.
    pub fn statistics(&self) -> CoefficientStats {
        let mut s1 = Neumaier::new();
        let mut s3 = Neumaier::new();
        let mut s3k2 = Neumaier::new();
        for (i, &v) in self.values.iter().enumerate() {
            let k = (i + 1) as f64;
            let a3 = v.abs().powi(3);
            s1.add(v.abs());
            s3.add(a3);
            s3k2.add(k * k * a3);
        }
        CoefficientStats { sum_abs: s1.value(), sum_abs_cubed: s3.value(), sum_k2_abs_cubed: s3k2.value() }
    }

    /// Hex SHA-256 over the degree and the little-endian coefficient bits.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.values.len() as u64).to_le_bytes());
        for v in &self.values {
            h.update(v.to_le_bytes());
        }
        hex::encode(h.finalize())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientStats {
    /// `Σ |f_k|`
    pub sum_abs: f64,
    /// `Σ |f_k|³`
    pub sum_abs_cubed: f64,
    /// `Σ k² |f_k|³`
    pub sum_k2_abs_cubed: f64,
}

/// The weight `2(2m−1)(−1)^k / ((2m−1)² − 4k²)` multiplying `f_k` in `L_m`.
///
/// `o = 2m − 1`. The denominator is odd minus even and never vanishes; it is
/// exact in binary64 while `o < 2^26`.
#[inline]
pub(crate) fn odd_weight(o: f64, k: usize) -> f64 {
    let kk = k as f64;
    let w = 2.0 * o / (o * o - 4.0 * kk * kk);
    if k % 2 == 1 {
        -w
    } else {
        w
    }
}

/// `L_m` and the absolute sum of its terms (for rounding budgets).
pub(crate) fn odd_channel_with_abs(values: &[f64], m: usize) -> (f64, f64) {
    let o = (2 * m - 1) as f64;
    let mut acc = Neumaier::new();
    let mut abs = Neumaier::new();
    acc.add(1.0 / o);
    abs.add(1.0 / o);
    for (i, &c) in values.iter().enumerate() {
        let t = odd_weight(o, i + 1) * c;
        acc.add(t);
        abs.add(t.abs());
    }
    (acc.value(), abs.value())
}

#[inline]
fn channel_from_row(values: &[f64], o: f64, row: Option<&[f64]>) -> f64 {
    let mut acc = Neumaier::new();
    acc.add(1.0 / o);
    match row {
        Some(row) => {
            for (w, &c) in row.iter().zip(values) {
                acc.add(w * c);
            }
        }
        None => {
            for (i, &c) in values.iter().enumerate() {
                acc.add(odd_weight(o, i + 1) * c);
            }
        }
    }
    acc.value()
}

/// The odd channel `L_m(f)` for `m ≥ 1`.
pub fn odd_channel(f: &FourierCoefficients, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::invalid("m", m, "odd channels are indexed from 1"));
    }
    Ok(channel_from_row(f.values(), (2 * m - 1) as f64, None))
}

/// Split of the truncated objective `𝒪(R, T)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveBreakdown {
    /// odd-frequency truncation `R`
    pub r: usize,
    /// `Σ_{m≤T} f_m⁴`
    pub even_sum: f64,
    /// `(16/π⁴) Σ_{m≤R} L_m⁴`
    pub odd_sum: f64,
    /// `1/2 + even_sum + odd_sum`
    pub total: f64,
}

/// Evaluates the truncated objective and its gradient for a fixed `(T, R)`.
///
/// The odd-channel weights are cached as a row-major `R × T` table when
/// `T·R` is within the cap, otherwise recomputed row by row. Both paths
/// produce bit-identical results.
#[derive(Clone, Debug)]
pub struct ObjectiveKernel {
    degree: usize,
    r: usize,
    table: Option<Vec<f64>>,
}

impl ObjectiveKernel {
    pub fn new(degree: usize, r: usize) -> Result<Self> {
        Self::with_table_cap(degree, r, DEFAULT_TABLE_CAP)
    }

    pub fn with_table_cap(degree: usize, r: usize, cap: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::invalid("R", r, "must be at least 1"));
        }
        let entries = degree.saturating_mul(r);
        let table = (degree > 0 && entries <= cap).then(|| {
            let mut table = vec![0.0; entries];
            table.par_chunks_mut(degree).enumerate().for_each(|(i, row)| {
                let o = (2 * i + 1) as f64;
                for (j, w) in row.iter_mut().enumerate() {
                    *w = odd_weight(o, j + 1);
                }
            });
            table
        });
        Ok(Self { degree, r, table })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn is_tabulated(&self) -> bool {
        self.table.is_some()
    }

    fn row(&self, m: usize) -> Option<&[f64]> {
        self.table.as_ref().map(|t| &t[(m - 1) * self.degree..m * self.degree])
    }

    fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.degree {
            return Err(Error::invalid("coefficients", x.len(), format!("kernel expects {} entries", self.degree)));
        }
        Ok(())
    }

    fn channels(&self, x: &[f64]) -> Vec<f64> {
        (1..=self.r).into_par_iter().map(|m| channel_from_row(x, (2 * m - 1) as f64, self.row(m))).collect()
    }

    fn assemble(&self, x: &[f64], channels: &[f64]) -> Result<ObjectiveBreakdown> {
        let even_sum = x.iter().map(|v| v.powi(4)).collect::<Neumaier>().value();
        let odd = par_sum(0, channels.len(), Accumulation::Compensated, |i| channels[i].powi(4));
        let odd_sum = ODD_SCALE * odd;
        let total = 0.5 + even_sum + odd_sum;
        if !total.is_finite() {
            return Err(Error::Overflow);
        }
        Ok(ObjectiveBreakdown { r: self.r, even_sum, odd_sum, total })
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<ObjectiveBreakdown> {
        self.check_len(x)?;
        let ch = self.channels(x);
        self.assemble(x, &ch)
    }

    pub fn value_and_gradient(&self, x: &[f64]) -> Result<(ObjectiveBreakdown, Vec<f64>)> {
        self.check_len(x)?;
        let ch = self.channels(x);
        let breakdown = self.assemble(x, &ch)?;
        let t = self.degree;
        let blocks = self.r.div_ceil(GRADIENT_BLOCK);
        let partials: Vec<Vec<Neumaier>> = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let mut acc = vec![Neumaier::new(); t];
                let lo = b * GRADIENT_BLOCK + 1;
                let hi = ((b + 1) * GRADIENT_BLOCK).min(self.r);
                for m in lo..=hi {
                    let l3 = ch[m - 1].powi(3);
                    match self.row(m) {
                        Some(row) => {
                            for (a, w) in acc.iter_mut().zip(row) {
                                a.add(l3 * w);
                            }
                        }
                        None => {
                            let o = (2 * m - 1) as f64;
                            for (j, a) in acc.iter_mut().enumerate() {
                                a.add(l3 * odd_weight(o, j + 1));
                            }
                        }
                    }
                }
                acc
            })
            .collect();
        let mut grad = Vec::with_capacity(t);
        let scale = 4.0 * ODD_SCALE;
        for j in 0..t {
            let mut acc = Neumaier::new();
            for p in &partials {
                acc.merge(p[j]);
            }
            grad.push(4.0 * x[j].powi(3) + scale * acc.value());
        }
        if grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::Overflow);
        }
        Ok((breakdown, grad))
    }
}

/// The truncated objective `1/2 + Σ f_m⁴ + (16/π⁴) Σ_{m≤R} L_m⁴`.
pub fn objective(f: &FourierCoefficients, r: usize) -> Result<ObjectiveBreakdown> {
    ObjectiveKernel::with_table_cap(f.degree(), r, 0)?.evaluate(f.values())
}

/// Gradient of [`objective`] with respect to `f_1..f_T`.
pub fn gradient(f: &FourierCoefficients, r: usize) -> Result<Vec<f64>> {
    Ok(ObjectiveKernel::with_table_cap(f.degree(), r, 0)?.value_and_gradient(f.values())?.1)
}

/// Upper bound on `Σ_{odd m ≥ first} (C/m)^p` for `p > 1` and odd `first ≥ 3`.
pub(crate) fn odd_power_tail(c: f64, first_odd: usize, p: f64) -> f64 {
    debug_assert!(first_odd % 2 == 1 && first_odd >= 3);
    // Σ_{odd m ≥ first} m^{-p} ≤ ½ ∫_{first−2}^{∞} x^{-p} dx
    c.powf(p) * ((first_odd - 2) as f64).powf(1.0 - p) / (2.0 * (p - 1.0))
}

/// Bound on the discarded odd channels `(16/π⁴) Σ_{m>R} L_m⁴`.
///
/// Channels up to `2T` are summed explicitly; beyond that
/// `|L_m| ≤ π C/(2m−1)` gives `(8/3) C⁴ (2R'−1)^{−3}`.
pub fn odd_tail_bound(f: &FourierCoefficients, r: usize) -> f64 {
    let r_explicit = r.max(2 * f.degree());
    let explicit = if r_explicit > r {
        ODD_SCALE
            * par_sum(r + 1, r_explicit + 1, Accumulation::Compensated, |m| {
                odd_channel_with_abs(f.values(), m).0.powi(4)
            })
    } else {
        0.0
    };
    let c = f.decay_constant();
    explicit + 8.0 / 3.0 * c.powi(4) * ((2 * r_explicit - 1) as f64).powi(-3)
}

/// Coefficients `F̂(m)`, `|m| ≤ M`, of the period-two zero extension.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodTwoSpectrum {
    m_max: usize,
    coeffs: Vec<f64>,
    degree: usize,
    decay: f64,
    values: Vec<f64>,
}

/// Computes `F̂(m)` for `0 ≤ m ≤ M` (negative indices by symmetry).
pub fn period2_spectrum(f: &FourierCoefficients, m_max: usize) -> Result<PeriodTwoSpectrum> {
    if m_max == 0 {
        return Err(Error::invalid("M", m_max, "must be at least 1"));
    }
    let values = f.values();
    let coeffs: Vec<f64> = (0..=m_max).into_par_iter().map(|m| spectrum_entry(values, m)).collect();
    Ok(PeriodTwoSpectrum { m_max, coeffs, degree: f.degree(), decay: f.decay_constant(), values: values.to_vec() })
}

fn spectrum_entry(values: &[f64], m: usize) -> f64 {
    if m == 0 {
        0.5
    } else if m % 2 == 0 {
        let k = m / 2;
        if k <= values.len() {
            0.5 * values[k - 1]
        } else {
            0.0
        }
    } else {
        let mm = m.div_ceil(2);
        let l = channel_from_row(values, m as f64, None);
        let sign = if mm % 2 == 1 { 1.0 } else { -1.0 };
        sign * l / PI
    }
}

impl PeriodTwoSpectrum {
    pub fn m_max(&self) -> usize {
        self.m_max
    }

    /// `F̂(m)`; indices beyond `M` are computed on demand.
    pub fn get(&self, m: i64) -> f64 {
        let m = m.unsigned_abs() as usize;
        if m <= self.m_max {
            self.coeffs[m]
        } else {
            spectrum_entry(&self.values, m)
        }
    }

    /// Nonnegative-index coefficients `F̂(0..=M)`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Decay constant `C` with `|F̂(m)| ≤ C/|m|` for odd `|m| ≥ 4T`.
    pub fn decay_constant(&self) -> f64 {
        self.decay
    }

    /// `Σ_{|m|>M} |F̂(m)|^p` bound: explicit up to `4T`, analytic beyond.
    fn tail_power(&self, p: f64) -> f64 {
        let explicit_to = self.m_max.max(4 * self.degree);
        let mut explicit = Neumaier::new();
        for m in self.m_max + 1..=explicit_to {
            explicit.add(2.0 * spectrum_entry(&self.values, m).abs().powf(p));
        }
        // even entries beyond 2T vanish; odd ones obey |F̂(m)| ≤ C/m past 4T
        let first = if explicit_to % 2 == 0 { explicit_to + 1 } else { explicit_to + 2 };
        explicit.value() + 2.0 * odd_power_tail(self.decay, first, p)
    }

    /// `8 Σ_{|m|≤M} F̂(m)⁴`, which converges to `‖f∗f‖₂²`.
    pub fn fourth_power_sum(&self) -> Truncated {
        let mut acc = Neumaier::new();
        acc.add(self.coeffs[0].powi(4));
        for &c in &self.coeffs[1..] {
            acc.add(2.0 * c.powi(4));
        }
        Truncated { value: 8.0 * acc.value(), tail: 8.0 * self.tail_power(4.0) }
    }

    /// `(F∗F)(x) = Σ_m 2 F̂(m)² e^{πimx}` truncated at `|m| ≤ M`.
    pub fn autoconvolution_at(&self, x: f64) -> Truncated {
        let mut acc = Neumaier::new();
        acc.add(2.0 * self.coeffs[0].powi(2));
        for (m, &c) in self.coeffs.iter().enumerate().skip(1) {
            acc.add(4.0 * c * c * (PI * m as f64 * x).cos());
        }
        Truncated { value: acc.value(), tail: 2.0 * self.tail_power(2.0) }
    }

    /// `(F∗F∗F)(x) = Σ_m F̂(m)³ e^{πimx}` truncated at `|m| ≤ M`.
    ///
    /// Convolution on the period-two circle is normalized by `1/2`, so this
    /// is a quarter of the real-line `f∗f∗f` on `(-1/2, 1/2)` and equals
    /// `μ₂²/4` there for the extremizer.
    pub fn threefold_at(&self, x: f64) -> Truncated {
        let mut acc = Neumaier::new();
        acc.add(self.coeffs[0].powi(3));
        for (m, &c) in self.coeffs.iter().enumerate().skip(1) {
            acc.add(2.0 * c.powi(3) * (PI * m as f64 * x).cos());
        }
        Truncated { value: acc.value(), tail: self.tail_power(3.0) }
    }
}

/// Exact `(f∗f)(x)` on `[-1, 1]` for the zero extension of `f`.
///
/// Uses the closed form of `∫ f(t) f(x−t) dt` over the overlap of the
/// supports; for `x ∈ [0, 1]`, with `a_k = f̂(k)` and `θ = 2πx`,
///
/// ```text
/// (1−x) Σ_k a_k² cos kθ + 2 Σ_{k<j} a_j a_k (−1)^{j−k} (sin kθ − sin jθ) / (2π(j−k)),
/// ```
///
/// extended evenly to `x < 0`. Costs `O(T²)` per point.
pub fn autoconvolution_curve(f: &FourierCoefficients, grid: &[f64]) -> Result<Vec<f64>> {
    if let Some(&x) = grid.iter().find(|x| !(x.abs() <= 1.0)) {
        return Err(Error::invalid("grid point", x, "must lie in [-1, 1]"));
    }
    let t = f.degree() as i64;
    let a: Vec<f64> = (-t..=t).map(|k| f.get(k)).collect();
    Ok(grid
        .par_iter()
        .map(|&x| {
            let x = x.abs();
            let theta = 2.0 * PI * x;
            let sines: Vec<f64> = (-t..=t).map(|k| (k as f64 * theta).sin()).collect();
            let mut acc = Neumaier::new();
            for (i, k) in (-t..=t).enumerate() {
                acc.add((1.0 - x) * a[i] * a[i] * (k as f64 * theta).cos());
            }
            for j in 0..a.len() {
                for k in 0..j {
                    let n = (j - k) as f64;
                    let sign = if (j - k) % 2 == 0 { 1.0 } else { -1.0 };
                    acc.add(sign * a[j] * a[k] * (sines[k] - sines[j]) / (PI * n));
                }
            }
            acc.value()
        })
        .collect())
}

/// Samples of `F∗F∗F` against the constant `μ₂²/4`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatnessReport {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub target: f64,
    pub max_deviation: f64,
    /// bound on the series remainder at every grid point
    pub tail: f64,
}

/// Measures how far `F∗F∗F` is from `candidate_mu2/4` on a grid inside
/// `(-1/2, 1/2)`, summing the spectrum up to `m_max` (raised to `4T` if
/// smaller).
pub fn threefold_flatness(
    f: &FourierCoefficients,
    candidate_mu2: f64,
    grid: &[f64],
    m_max: usize,
) -> Result<FlatnessReport> {
    if !(candidate_mu2 > 0.0) {
        return Err(Error::invalid("candidate_mu2", candidate_mu2, "must be positive"));
    }
    if let Some(&x) = grid.iter().find(|x| !(x.abs() < 0.5)) {
        return Err(Error::invalid("grid point", x, "must lie in (-1/2, 1/2)"));
    }
    let spectrum = period2_spectrum(f, m_max.max(4 * f.degree()).max(1))?;
    let target = candidate_mu2 / 4.0;
    let samples: Vec<Truncated> = grid.par_iter().map(|&x| spectrum.threefold_at(x)).collect();
    let tail = samples.first().map_or(0.0, |s| s.tail);
    let values: Vec<f64> = samples.iter().map(|s| s.value).collect();
    let max_deviation = values.iter().map(|v| (v - target).abs()).fold(0.0, f64::max);
    Ok(FlatnessReport { grid: grid.to_vec(), values, target, max_deviation, tail })
}
