//! Minimization of the truncated objective over `f_1..f_T`.
//!
//! The objective is a sum of fourth powers of affine functions of the
//! coefficients, so it is smooth and convex and any first-order point is a
//! global minimizer. We run L-BFGS with a strong-Wolfe line search directly
//! on it; no auxiliary variables are needed.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::Neumaier;
use crate::spectral::{FourierCoefficients, ObjectiveBreakdown, ObjectiveKernel, DEFAULT_TABLE_CAP};

/// Number of consecutive iterations with relative decrease below
/// `rel_obj_tol` before the run is declared converged.
const STALL_WINDOW: usize = 5;
const WOLFE_C1: f64 = 1e-4;
const WOLFE_C2: f64 = 0.9;
const LINE_SEARCH_EVALS: usize = 60;

#[derive(Clone, Debug)]
pub enum Init {
    /// `f ≡ 1`
    Zeros,
    /// previous solution padded with zeros
    WarmStart(FourierSolution),
    Explicit(Vec<f64>),
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub t: usize,
    pub r: usize,
    /// max-norm of the gradient
    pub grad_tol: f64,
    pub rel_obj_tol: f64,
    pub max_iterations: usize,
    /// number of stored curvature pairs
    pub memory: usize,
    pub init: Init,
    /// cap on the cached `T·R` weight table
    pub table_cap: usize,
    /// emit an info log line every this many iterations (0 disables)
    pub log_every: usize,
}

impl SolverConfig {
    pub fn new(t: usize, r: usize) -> Self {
        Self {
            t,
            r,
            grad_tol: 1e-10,
            rel_obj_tol: 1e-12,
            max_iterations: 100_000,
            memory: 10,
            init: Init::Zeros,
            table_cap: DEFAULT_TABLE_CAP,
            log_every: 100,
        }
    }

    pub fn with_init(mut self, init: Init) -> Self {
        self.init = init;
        self
    }

    pub fn with_grad_tol(mut self, tol: f64) -> Self {
        self.grad_tol = tol;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.r == 0 {
            return Err(Error::invalid("R", self.r, "must be at least 1"));
        }
        if !(self.grad_tol > 0.0) {
            return Err(Error::invalid("grad_tol", self.grad_tol, "must be positive"));
        }
        if !(self.rel_obj_tol > 0.0) {
            return Err(Error::invalid("rel_obj_tol", self.rel_obj_tol, "must be positive"));
        }
        if self.memory == 0 {
            return Err(Error::invalid("memory", self.memory, "must be at least 1"));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("max_iterations", self.max_iterations, "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    NoFreeVariables,
    GradientTolerance,
    ObjectiveStalled,
    /// the line search could not resolve a decrease above rounding level
    LineSearchStalled,
    IterationCap,
}

#[derive(Clone, Debug)]
pub struct FourierSolution {
    pub coeffs: FourierCoefficients,
    pub r: usize,
    pub breakdown: ObjectiveBreakdown,
    /// max-norm of the gradient at `coeffs`
    pub grad_norm: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    pub stop_reason: StopReason,
}

/// Initialization vector for degree `new_t` from a previous solution.
pub fn warm_start_extend(prev: &FourierSolution, new_t: usize) -> Result<Vec<f64>> {
    extend_coefficients(&prev.coeffs, new_t)
}

/// `f_1..f_T` padded with zeros to `new_t` entries.
pub fn extend_coefficients(f: &FourierCoefficients, new_t: usize) -> Result<Vec<f64>> {
    let old = f.values();
    if new_t < old.len() {
        return Err(Error::WarmStartShrink { previous: old.len(), requested: new_t });
    }
    let mut v = old.to_vec();
    v.resize(new_t, 0.0);
    Ok(v)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).collect::<Neumaier>().value()
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[derive(Clone)]
struct Probe {
    alpha: f64,
    f: f64,
    dphi: f64,
    x: Vec<f64>,
    g: Vec<f64>,
    breakdown: ObjectiveBreakdown,
}

struct CurvaturePair {
    s: Vec<f64>,
    y: Vec<f64>,
    rho: f64,
}

fn two_loop(history: &VecDeque<CurvaturePair>, g: &[f64]) -> Vec<f64> {
    let mut q: Vec<f64> = g.to_vec();
    let mut alphas = Vec::with_capacity(history.len());
    for p in history.iter().rev() {
        let a = p.rho * dot(&p.s, &q);
        for (qi, yi) in q.iter_mut().zip(&p.y) {
            *qi -= a * yi;
        }
        alphas.push(a);
    }
    if let Some(last) = history.back() {
        let gamma = dot(&last.s, &last.y) / dot(&last.y, &last.y);
        q.iter_mut().for_each(|v| *v *= gamma);
    }
    for (p, a) in history.iter().zip(alphas.iter().rev()) {
        let b = p.rho * dot(&p.y, &q);
        for (qi, si) in q.iter_mut().zip(&p.s) {
            *qi += (a - b) * si;
        }
    }
    q.iter_mut().for_each(|v| *v = -*v);
    q
}

struct LineSearch<'a> {
    kernel: &'a ObjectiveKernel,
    x: &'a [f64],
    d: &'a [f64],
    f0: f64,
    dphi0: f64,
    noise: f64,
    evaluations: usize,
}

impl LineSearch<'_> {
    fn probe(&mut self, alpha: f64) -> Result<Probe> {
        self.evaluations += 1;
        let x: Vec<f64> = self.x.iter().zip(self.d).map(|(x, d)| x + alpha * d).collect();
        let (breakdown, g) = self.kernel.value_and_gradient(&x)?;
        let dphi = dot(&g, self.d);
        Ok(Probe { alpha, f: breakdown.total, dphi, x, g, breakdown })
    }

    fn sufficient(&self, p: &Probe) -> bool {
        // Armijo, or the approximate-Wolfe variant once differences in f
        // are at rounding level.
        p.f <= self.f0 + WOLFE_C1 * p.alpha * self.dphi0
            || (p.f <= self.f0 + self.noise && p.dphi <= (2.0 * WOLFE_C1 - 1.0) * self.dphi0)
    }

    fn curvature(&self, p: &Probe) -> bool {
        p.dphi.abs() <= WOLFE_C2 * self.dphi0.abs()
    }

    fn run(&mut self, start: Probe, alpha0: f64) -> Result<Option<Probe>> {
        let mut prev = start.clone();
        let mut alpha = alpha0;
        for i in 0..LINE_SEARCH_EVALS {
            let p = self.probe(alpha)?;
            if !self.sufficient(&p) || (i > 0 && p.f >= prev.f) {
                return self.zoom(prev, p, &start);
            }
            if self.curvature(&p) {
                return Ok(Some(p));
            }
            if p.dphi >= 0.0 {
                return self.zoom(p, prev, &start);
            }
            prev = p;
            alpha *= 2.0;
        }
        Ok((prev.alpha > 0.0).then_some(prev))
    }

    fn zoom(&mut self, mut lo: Probe, mut hi: Probe, start: &Probe) -> Result<Option<Probe>> {
        while self.evaluations < LINE_SEARCH_EVALS * 2 {
            let (a, b) = (lo.alpha.min(hi.alpha), lo.alpha.max(hi.alpha));
            let width = b - a;
            if width <= 1e-15 * b.max(1e-300) {
                break;
            }
            let mut alpha = cubic_minimizer(&lo, &hi).unwrap_or(f64::NAN);
            if !(alpha > a + 0.1 * width && alpha < b - 0.1 * width) {
                alpha = 0.5 * (a + b);
            }
            let p = self.probe(alpha)?;
            if !self.sufficient(&p) || p.f >= lo.f {
                hi = p;
            } else {
                if self.curvature(&p) {
                    return Ok(Some(p));
                }
                if p.dphi * (hi.alpha - lo.alpha) >= 0.0 {
                    hi = lo;
                }
                lo = p;
            }
        }
        // settle for sufficient decrease without the curvature condition
        Ok((lo.alpha > 0.0 && lo.f <= start.f).then_some(lo))
    }
}

/// Minimizer of the cubic interpolating values and slopes at two probes.
fn cubic_minimizer(p: &Probe, q: &Probe) -> Option<f64> {
    let d1 = p.dphi + q.dphi - 3.0 * (p.f - q.f) / (p.alpha - q.alpha);
    let disc = d1 * d1 - p.dphi * q.dphi;
    if !(disc >= 0.0) {
        return None;
    }
    let d2 = (q.alpha - p.alpha).signum() * disc.sqrt();
    let a = q.alpha - (q.alpha - p.alpha) * (q.dphi + d2 - d1) / (q.dphi - p.dphi + 2.0 * d2);
    a.is_finite().then_some(a)
}

/// Minimizes `𝒪(R, T)` from the configured starting point.
pub fn solve(config: &SolverConfig) -> Result<FourierSolution> {
    config.validate()?;
    let t = config.t;
    if config.r < t {
        log::warn!("R = {} is smaller than T = {}; the odd-channel truncation is coarse", config.r, t);
    }
    let kernel = ObjectiveKernel::with_table_cap(t, config.r, config.table_cap)?;
    let mut x = match &config.init {
        Init::Zeros => vec![0.0; t],
        Init::WarmStart(prev) => warm_start_extend(prev, t)?,
        Init::Explicit(v) => {
            if v.len() != t {
                return Err(Error::invalid("initial vector", v.len(), format!("expected {t} entries")));
            }
            FourierCoefficients::new(v.clone())?.into_values()
        }
    };
    let (mut breakdown, mut g) = kernel.value_and_gradient(&x)?;
    let mut evaluations = 1;
    let finish = |x: Vec<f64>, breakdown, g: &[f64], iterations, evaluations, reason| -> Result<FourierSolution> {
        Ok(FourierSolution {
            coeffs: FourierCoefficients::new(x)?,
            r: config.r,
            breakdown,
            grad_norm: max_norm(g),
            iterations,
            evaluations,
            converged: reason != StopReason::IterationCap,
            stop_reason: reason,
        })
    };
    if t == 0 {
        return finish(x, breakdown, &g, 0, evaluations, StopReason::NoFreeVariables);
    }

    let mut history: VecDeque<CurvaturePair> = VecDeque::with_capacity(config.memory);
    let mut stalled = 0;
    for iter in 0..config.max_iterations {
        let gnorm = max_norm(&g);
        if gnorm <= config.grad_tol {
            return finish(x, breakdown, &g, iter, evaluations, StopReason::GradientTolerance);
        }
        if config.log_every > 0 && iter % config.log_every == 0 {
            log::info!("iter {iter:>6}  objective {:.15}  |grad|_inf {gnorm:.3e}", breakdown.total);
        }

        let f0 = breakdown.total;
        let noise = 4.0 * f64::EPSILON * f0.abs();
        let mut accepted = None;
        // try the quasi-Newton direction, then steepest descent
        for attempt in 0..2 {
            let mut d = if attempt == 0 && !history.is_empty() {
                two_loop(&history, &g)
            } else {
                g.iter().map(|v| -v).collect()
            };
            let mut dphi0 = dot(&g, &d);
            if !(dphi0 < 0.0) {
                history.clear();
                d = g.iter().map(|v| -v).collect();
                dphi0 = dot(&g, &d);
            }
            let alpha0 = if history.is_empty() {
                let l2 = dot(&g, &g).sqrt();
                (1.0 / l2).min(1.0)
            } else {
                1.0
            };
            let start = Probe { alpha: 0.0, f: f0, dphi: dphi0, x: x.clone(), g: g.clone(), breakdown };
            let mut ls = LineSearch { kernel: &kernel, x: &x, d: &d, f0, dphi0, noise, evaluations: 0 };
            let found = ls.run(start, alpha0)?;
            evaluations += ls.evaluations;
            if let Some(p) = found {
                accepted = Some(p);
                break;
            }
            history.clear();
        }

        let Some(p) = accepted else {
            // no measurable decrease along either direction
            let probe = kernel.evaluate(&x)?;
            if (probe.total - f0).abs() <= noise || gnorm <= config.grad_tol.sqrt() {
                return finish(x, breakdown, &g, iter, evaluations, StopReason::LineSearchStalled);
            }
            return Err(Error::LineSearchFailed { iteration: iter, objective: f0, iterate: x });
        };

        let s: Vec<f64> = p.x.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = p.g.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > f64::EPSILON * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            if history.len() == config.memory {
                history.pop_front();
            }
            history.push_back(CurvaturePair { s, y, rho: 1.0 / sy });
        }

        let decrease = (f0 - p.f) / p.f.abs().max(1.0);
        stalled = if decrease < config.rel_obj_tol { stalled + 1 } else { 0 };
        x = p.x;
        g = p.g;
        breakdown = p.breakdown;
        if stalled >= STALL_WINDOW {
            return finish(x, breakdown, &g, iter + 1, evaluations, StopReason::ObjectiveStalled);
        }
    }
    log::warn!("iteration cap {} reached", config.max_iterations);
    finish(x, breakdown, &g, config.max_iterations, evaluations, StopReason::IterationCap)
}
