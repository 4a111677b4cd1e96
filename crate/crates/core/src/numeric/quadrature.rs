//! Numerical integration: adaptive Gauss–Kronrod, tanh–sinh for endpoint
//! singularities, and Gauss–Legendre rules.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::sum::Neumaier;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut gauss = fc * WG[3];
    let mut kron = fc * WGK[7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive Gauss–Kronrod (7/15) integration of `f` over `[a, b]`.
///
/// Bisects the segment with the largest error estimate until the summed
/// estimate drops below `max(abs_tol, rel_tol * |value|)` or `max_segments`
/// is reached.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64, max_segments: usize) -> Integral {
    let mut heap = BinaryHeap::new();
    let (value, error) = kronrod15(&f, a, b);
    heap.push(Segment { a, b, value, error });
    let mut evaluations = 15;
    loop {
        let total: Neumaier = heap.iter().map(|s| s.value).collect();
        let err: Neumaier = heap.iter().map(|s| s.error).collect();
        let (total, err) = (total.value(), err.value());
        if err <= abs_tol.max(rel_tol * total.abs()) || heap.len() >= max_segments {
            return Integral { value: total, error: err, evaluations };
        }
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            let total: Neumaier = heap.iter().map(|s| s.value).collect();
            return Integral { value: total.value(), error: err, evaluations };
        }
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = kronrod15(&f, lo, hi);
            heap.push(Segment { a: lo, b: hi, value, error });
        }
        evaluations += 30;
    }
}

/// Tanh–sinh (double exponential) quadrature over `[a, b]`.
///
/// The integrand receives `(x, x - a, b - x)` with both distances computed
/// without cancellation, so algebraic endpoint singularities can be
/// evaluated accurately. Refines the step until successive estimates agree
/// to `tol`.
pub fn tanh_sinh<F: Fn(f64, f64, f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Integral {
    use std::f64::consts::FRAC_PI_2;
    let half = 0.5 * (b - a);
    let mid = a + half;
    // Contribution of the abscissae t = k*h for odd k (or all k at level 0).
    let layer = |h: f64, step: usize, start: usize| -> (Neumaier, usize) {
        let mut acc = Neumaier::new();
        let mut n = 0;
        let mut k = start;
        loop {
            let t = k as f64 * h;
            let u = FRAC_PI_2 * t.sinh();
            let cu = u.cosh();
            let w = FRAC_PI_2 * t.cosh() / (cu * cu);
            // distance from the nearer endpoint, in units of `half`
            let delta = 2.0 / ((2.0 * u).exp() + 1.0);
            let d = half * delta;
            if !(w > 1e-300) || !(d > 0.0) {
                break;
            }
            if k == 0 {
                acc.add(w * f(mid, half, half));
            } else {
                let left = f(a + d, d, 2.0 * half - d);
                let right = f(b - d, 2.0 * half - d, d);
                acc.add(w * (left + right));
                n += 1;
            }
            n += 1;
            k += step;
        }
        (acc, n)
    };
    let mut h = 1.0;
    let (mut sum, mut evaluations) = layer(h, 1, 0);
    let mut estimate = half * h * sum.value();
    for _ in 0..12 {
        h *= 0.5;
        let (extra, n) = layer(h, 2, 1);
        evaluations += n;
        sum.merge(extra);
        let next = half * h * sum.value();
        let diff = (next - estimate).abs();
        estimate = next;
        if diff <= tol * estimate.abs().max(1.0) && h < 0.25 {
            return Integral { value: estimate, error: diff, evaluations };
        }
    }
    Integral { value: estimate, error: f64::NAN, evaluations }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}
