//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use autoconv::certify::{optimize_alpha, sandwich_width, upper_bound, BoundCertificate, DEFAULT_ALPHA_INTERVAL};
use autoconv::discrete::{additive_energy, sigma_bounds, WeightSequence};
use autoconv::family::{family_norm, optimize_c, terms_for_tail, OPTIMIZE_K};
use autoconv::io::{Report, SolutionFile};
use autoconv::numeric::Accumulation;
use autoconv::reference::{FAMILY_BEST_C, FAMILY_BEST_NORM, MU2_SQUARED_LOWER, PUBLISHED_PREFIX};
use autoconv::solver::{solve, FourierSolution, SolverConfig};
use autoconv::spectral::{autoconvolution_curve, gradient, objective, odd_tail_bound, threefold_flatness};
use autoconv::FourierCoefficients;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const R: usize = 4000;
const N_CERT: usize = 1_000_000;
const MODE: Accumulation = Accumulation::Compensated;
const STAMP: &str = "2000-01-01T00:00:00Z";

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

struct Certified {
    solution: FourierSolution,
    upper: BoundCertificate,
    lower: BoundCertificate,
}

/// Solves and certifies once per degree; criteria 4, 5, 7 and 10 share them.
struct Ladder {
    runs: Vec<Certified>,
}

impl Ladder {
    fn build() -> Self {
        let runs = [20, 100, 300]
            .into_iter()
            .map(|t| {
                let solution = solve(&SolverConfig::new(t, R)).expect("solve");
                let upper = upper_bound(&solution.coeffs, N_CERT, MODE).expect("upper");
                let (_, lower) = optimize_alpha(&solution.coeffs, N_CERT, DEFAULT_ALPHA_INTERVAL, MODE).expect("lower");
                Certified { solution, upper, lower }
            })
            .collect();
        Self { runs }
    }

    fn at(&self, t: usize) -> &Certified {
        self.runs.iter().find(|r| r.solution.coeffs.degree() == t).expect("degree in ladder")
    }
}

fn criterion_1() -> Outcome {
    let f = FourierCoefficients::constant();
    let r = 1_000_000;
    let total = objective(&f, r).unwrap().total + odd_tail_bound(&f, r);
    let err = (total - 2.0 / 3.0).abs();
    let grid: Vec<f64> = (0..1000).map(|i| -1.0 + 2.0 * i as f64 / 999.0).collect();
    let curve = autoconvolution_curve(&f, &grid).unwrap();
    let tent = grid.iter().zip(&curve).map(|(x, v)| (v - (1.0 - x.abs())).abs()).fold(0.0, f64::max);
    outcome(err < 1e-10 && tent < 1e-10, format!("|total − 2/3| = {err:.2e}, tent error {tent:.2e}"))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let t = rng.random_range(1..=20);
        let f = common::random_coefficients(&mut rng, t, 0.5);
        let r = 100_000;
        let spectral = objective(&f, r).unwrap().total + odd_tail_bound(&f, r);
        let quad = common::l2_norm_squared_by_quadrature(&f);
        worst = worst.max((spectral - quad).abs());
    }
    outcome(worst <= 1e-7, format!("max |spectral − quadrature| = {worst:.2e} over 20 polynomials"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let t = 30;
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let base: Vec<f64> = (0..t).map(|k| rng.random_range(-0.5..0.5) / (k + 1) as f64).collect();
        let g = gradient(&FourierCoefficients::new(base.clone()).unwrap(), R).unwrap();
        for j in 0..t {
            let at = |d: f64| {
                let mut v = base.clone();
                v[j] += d;
                objective(&FourierCoefficients::new(v).unwrap(), R).unwrap().total
            };
            let fd = (at(h) - at(-h)) / (2.0 * h);
            worst = worst.max((g[j] - fd).abs() / g[j].abs());
        }
    }
    outcome(worst <= 1e-6, format!("max componentwise relative error {worst:.2e} at 50 points"))
}

fn criterion_4(ladder: &Ladder) -> Outcome {
    let run = ladder.at(300);
    let (u, l) = (run.upper.value, run.lower.value);
    outcome(
        u <= 0.5750 && l >= 0.5740 && l <= u,
        format!("T=300: lower {l:.10} ≤ upper {u:.10} (α = {:.6})", run.lower.alpha.unwrap_or(f64::NAN)),
    )
}

fn criterion_5(ladder: &Ladder) -> Outcome {
    let totals: Vec<f64> = ladder.runs.iter().map(|r| r.solution.breakdown.total).collect();
    let widths: Vec<f64> = ladder.runs.iter().map(|r| sandwich_width(&r.lower, &r.upper)).collect();
    let decreasing = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]);
    outcome(
        decreasing(&totals) && decreasing(&widths) && widths.iter().all(|&w| w >= 0.0),
        format!(
            "totals {:.9} > {:.9} > {:.9}; widths {:.2e} > {:.2e} > {:.2e}",
            totals[0], totals[1], totals[2], widths[0], widths[1], widths[2]
        ),
    )
}

fn criterion_6() -> Outcome {
    let k = terms_for_tail(FAMILY_BEST_C, 5e-9).unwrap();
    let (value, tail) = family_norm(FAMILY_BEST_C, k).unwrap();
    let (c, _) = optimize_c((0.45, 0.55), OPTIMIZE_K).unwrap();
    let err = (value - FAMILY_BEST_NORM).abs();
    outcome(
        tail <= 5e-9 && err <= 5e-7 && (0.4935..=0.4950).contains(&c),
        format!("value {value:.10} (K = {k}, tail {tail:.1e}, |Δ| = {err:.1e}); c* = {c:.5}"),
    )
}

fn criterion_7(ladder: &Ladder) -> Outcome {
    let f = &ladder.at(300).solution.coeffs;
    let mut signs = true;
    let mut worst: f64 = 0.0;
    for (k, reference) in PUBLISHED_PREFIX.iter().enumerate() {
        let v = f.values()[k];
        let expected = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
        signs &= v.signum() == expected;
        worst = worst.max((v - reference).abs());
    }
    outcome(signs && worst <= 0.02, format!("signs alternate: {signs}; max |f_k − published| = {worst:.4}"))
}

fn brute_force_energy(h: &[f64]) -> f64 {
    let n = h.len();
    let mut e = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if a + b >= c && a + b - c < n {
                    e += h[a] * h[b] * h[c] * h[a + b - c];
                }
            }
        }
    }
    e
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut min_ratio = f64::INFINITY;
    for n in [8, 64, 200] {
        for _ in 0..100 {
            for h in [
                WeightSequence::random_nonnegative(n, &mut rng).unwrap(),
                WeightSequence::random_signed(n, &mut rng).unwrap(),
            ] {
                min_ratio = min_ratio.min(additive_energy(&h).ratio);
            }
        }
    }
    let mut exact = true;
    for n in 1..=12 {
        for _ in 0..10 {
            let mut v: Vec<i64> = (0..n).map(|_| rng.random_range(-3..=5)).collect();
            let s: i64 = v.iter().sum();
            v[n - 1] += n as i64 - s;
            let w: Vec<f64> = v.into_iter().map(|x| x as f64).collect();
            let h = WeightSequence::new(w.clone()).unwrap();
            exact &= additive_energy(&h).energy == brute_force_energy(&w);
        }
    }
    outcome(
        min_ratio >= 1.0 && exact,
        format!("min E/(μ₂² N³) = {min_ratio:.4} over 600 sequences; brute force exact: {exact}"),
    )
}

/// `a^{1/p}` by bisection.
fn root(a: f64, p: i32) -> f64 {
    let (mut lo, mut hi) = (0.0f64, a.max(1.0));
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid.powi(p) < a {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn criterion_9() -> Outcome {
    let mu = MU2_SQUARED_LOWER;
    let s = sigma_bounds(mu).unwrap();
    let pairs = [
        (s.sigma2(2).unwrap(), root(1.5 / mu, 2)),
        (s.sigma2(3).unwrap(), root((2.0 - 1.0 / 3.0) / mu, 2)),
        (s.sigma2(4).unwrap(), root(1.75 / mu, 2)),
        (s.sigma3_1, root(2.0 / mu, 3)),
        (s.sigma4_1, root(4.0 / mu, 4)),
    ];
    let worst = pairs.iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let values: Vec<String> = pairs.iter().map(|(a, _)| format!("{a:.4}")).collect();
    outcome(worst <= 5e-4, format!("σ = [{}], max deviation {worst:.1e}", values.join(", ")))
}

fn criterion_10(ladder: &Ladder) -> Outcome {
    let grid: Vec<f64> = (0..180).map(|i| -0.45 + 0.9 * (i as f64 + 0.5) / 180.0).collect();
    let devs: Vec<(f64, f64)> = ladder
        .runs
        .iter()
        .map(|r| {
            let rep = threefold_flatness(&r.solution.coeffs, r.solution.breakdown.total, &grid, N_CERT).unwrap();
            (rep.max_deviation, rep.tail)
        })
        .collect();
    // the trend must survive the series remainder
    let decreasing = devs.windows(2).all(|w| w[1].0 + w[1].1 < w[0].0 - w[0].1);
    outcome(
        decreasing,
        format!("max deviation {:.3e} > {:.3e} > {:.3e} (tails ≤ {:.1e})", devs[0].0, devs[1].0, devs[2].0, devs[2].1),
    )
}

/// Solution text and report body for a fixed workload.
fn reproducible_artifacts(seed: u64) -> (String, String) {
    let sol = solve(&SolverConfig::new(100, R)).unwrap();
    let text = SolutionFile::from_solution(&sol, STAMP).to_text();
    let f = &sol.coeffs;
    let upper = upper_bound(f, N_CERT, MODE).unwrap();
    let (alpha, lower) = optimize_alpha(f, N_CERT, DEFAULT_ALPHA_INTERVAL, MODE).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let energies: Vec<f64> =
        (0..5).map(|_| additive_energy(&WeightSequence::random_signed(300, &mut rng).unwrap()).energy).collect();
    let (family, _) = family_norm(0.3, 100_000).unwrap();
    let body = json!({
        "digest": f.digest(),
        "breakdown": sol.breakdown,
        "upper": upper,
        "lower": lower,
        "alpha": alpha,
        "energies": energies,
        "family": family,
    });
    (text, Report::new(STAMP, body).body_text())
}

fn criterion_11() -> Outcome {
    let in_pool = |threads: usize| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| reproducible_artifacts(11))
    };
    let reference = in_pool(1);
    let mut identical = true;
    for threads in [2, 3, 8] {
        identical &= in_pool(threads) == reference;
    }
    identical &= in_pool(1) == reference;
    outcome(identical, "solution text and report body identical across 1, 2, 3, 8 threads and repeat runs".into())
}

fn main() {
    let mut results: Vec<(usize, Outcome, Duration)> = Vec::new();
    let mut run = |id: usize, f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let o = f();
        let elapsed = start.elapsed();
        println!(
            "criterion {id:>2}: {}  {}  [{:.1} s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64()
        );
        results.push((id, o, elapsed));
    };

    run(1, &criterion_1);
    run(2, &criterion_2);
    run(3, &criterion_3);
    let start = Instant::now();
    let ladder = Ladder::build();
    println!("             (solved and certified T = 20, 100, 300 in {:.1} s)", start.elapsed().as_secs_f64());
    run(4, &|| criterion_4(&ladder));
    run(5, &|| criterion_5(&ladder));
    run(6, &criterion_6);
    run(7, &|| criterion_7(&ladder));
    run(8, &criterion_8);
    run(9, &criterion_9);
    run(10, &|| criterion_10(&ladder));
    run(11, &criterion_11);

    let failed: Vec<usize> = results.iter().filter(|(_, o, _)| !o.pass).map(|(id, _, _)| *id).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", results.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
