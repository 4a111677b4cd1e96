//! Golden-section search on a bracketing interval.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Outcome of a one-dimensional search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchResult {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Minimizes `f` on `[lo, hi]` until the bracket is narrower than `tol`.
///
/// The endpoints are evaluated as well and the best point seen is returned,
/// so the result never exceeds `f(lo)` or `f(hi)` even when `f` is not
/// unimodal.
pub fn golden_section_min<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> SearchResult {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut best = SearchResult { x: a, value: f(a), evaluations: 1 };
    let consider = |x: f64, v: f64, best: &mut SearchResult| {
        best.evaluations += 1;
        if v < best.value {
            best.x = x;
            best.value = v;
        }
    };
    let fb = f(b);
    consider(b, fb, &mut best);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    consider(x1, f1, &mut best);
    let mut f2 = f(x2);
    consider(x2, f2, &mut best);
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
            consider(x1, f1, &mut best);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
            consider(x2, f2, &mut best);
        }
    }
    best
}

/// Maximizes `f` on `[lo, hi]`; see [`golden_section_min`].
pub fn golden_section_max<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> SearchResult {
    let r = golden_section_min(|x| -f(x), lo, hi, tol);
    SearchResult { value: -r.value, ..r }
}
