//! Compensated accumulators and deterministic parallel reductions.
//!
//! Every long sum in the crate goes through [`Neumaier`] or [`DoubleDouble`].
//! Parallel sums split the index range into fixed-size blocks, reduce each
//! block sequentially and then fold the block results in index order, so the
//! result does not depend on how many worker threads rayon happens to use.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use rayon::prelude::*;

/// Block length for [`par_sum`]. Independent of the thread count.
pub const REDUCTION_BLOCK: usize = 4096;

/// Neumaier (improved Kahan–Babuška) running sum.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub const fn new() -> Self {
        Self { sum: 0.0, comp: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn merge(&mut self, other: Neumaier) {
        self.add(other.sum);
        self.add(other.comp);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for Neumaier {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Neumaier::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Compensated sum of a slice.
pub fn compensated_sum(values: &[f64]) -> f64 {
    values.iter().copied().collect::<Neumaier>().value()
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Unevaluated sum `hi + lo` carrying roughly 106 bits of significand.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    pub const fn from_f64(v: f64) -> Self {
        Self { hi: v, lo: 0.0 }
    }

    /// Exact sum of two doubles.
    pub fn sum_of(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        Self { hi, lo }
    }

    /// Exact product of two doubles.
    pub fn product_of(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Self { hi, lo }
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn to_f64(&self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }
}

impl From<f64> for DoubleDouble {
    fn from(v: f64) -> Self {
        Self::from_f64(v)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl Add<f64> for DoubleDouble {
    type Output = Self;
    fn add(self, rhs: f64) -> Self {
        let (s, e) = two_sum(self.hi, rhs);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        Self { hi, lo }
    }
}

impl AddAssign for DoubleDouble {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl AddAssign<f64> for DoubleDouble {
    fn add_assign(&mut self, rhs: f64) {
        *self = *self + rhs;
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl Mul<f64> for DoubleDouble {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        let (p, e) = two_prod(self.hi, rhs);
        let (hi, lo) = quick_two_sum(p, e + self.lo * rhs);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        // Long division: one correction step on the leading quotient digit.
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * q1;
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * q2;
        let q3 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo } + q3
    }
}

/// Accumulation precision for the long certification sums.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Accumulation {
    /// binary64 with Neumaier compensation.
    #[default]
    Compensated,
    /// double-double accumulation of every term.
    DoubleDouble,
}

/// Running sum in either accumulation mode.
#[derive(Clone, Copy, Debug)]
pub enum Accumulator {
    Compensated(Neumaier),
    DoubleDouble(DoubleDouble),
}

impl Accumulator {
    pub fn new(mode: Accumulation) -> Self {
        match mode {
            Accumulation::Compensated => Self::Compensated(Neumaier::new()),
            Accumulation::DoubleDouble => Self::DoubleDouble(DoubleDouble::ZERO),
        }
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        match self {
            Self::Compensated(n) => n.add(v),
            Self::DoubleDouble(d) => *d += v,
        }
    }

    pub fn merge(&mut self, other: &Accumulator) {
        match (self, other) {
            (Self::Compensated(a), Self::Compensated(b)) => a.merge(*b),
            (Self::DoubleDouble(a), Self::DoubleDouble(b)) => *a += *b,
            (a, b) => {
                let v = b.value();
                a.add(v);
            }
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            Self::Compensated(n) => n.value(),
            Self::DoubleDouble(d) => d.to_f64(),
        }
    }

    /// Relative rounding allowance of the accumulation itself, per unit of
    /// the absolute sum of the accumulated terms.
    pub fn relative_error(mode: Accumulation, terms: usize) -> f64 {
        let eps = f64::EPSILON;
        match mode {
            Accumulation::Compensated => 2.0 * eps + 2.0 * terms as f64 * eps * eps,
            Accumulation::DoubleDouble => eps + 4.0 * terms as f64 * eps * eps * eps,
        }
    }
}

/// Deterministic parallel sum of `term(i)` for `i` in `start..end`.
pub fn par_sum<F>(start: usize, end: usize, mode: Accumulation, term: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    par_sum_many::<1, _>(start, end, mode, |i| [term(i)])[0]
}

/// Deterministic parallel sum of several per-index quantities at once.
///
/// Each block of [`REDUCTION_BLOCK`] indices is accumulated sequentially;
/// block results are merged left to right.
pub fn par_sum_many<const K: usize, F>(start: usize, end: usize, mode: Accumulation, term: F) -> [f64; K]
where
    F: Fn(usize) -> [f64; K] + Sync,
{
    if end <= start {
        return [0.0; K];
    }
    let blocks = (end - start).div_ceil(REDUCTION_BLOCK);
    let partials: Vec<[Accumulator; K]> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let lo = start + b * REDUCTION_BLOCK;
            let hi = (lo + REDUCTION_BLOCK).min(end);
            let mut acc = [Accumulator::new(mode); K];
            for i in lo..hi {
                let vals = term(i);
                for (a, v) in acc.iter_mut().zip(vals) {
                    a.add(v);
                }
            }
            acc
        })
        .collect();
    let mut total = [Accumulator::new(mode); K];
    for part in &partials {
        for (t, p) in total.iter_mut().zip(part) {
            t.merge(p);
        }
    }
    total.map(|a| a.value())
}
