//! Subcommand implementations.

use std::fmt::Write as _;
use std::path::Path;

use autoconv::certify::{self, sandwich_width};
use autoconv::discrete::{additive_energy_against, sigma_bounds, WeightSequence};
use autoconv::family::{self, family_norm, family_scan, local_minima, optimize_c, terms_for_tail};
use autoconv::io::{Report, SolutionFile, TOOL_VERSION};
use autoconv::numeric::Accumulation;
use autoconv::solver::{extend_coefficients, solve as run_solver, Init, SolverConfig};
use autoconv::spectral::autoconvolution_curve;
use chrono::{DateTime, SecondsFormat, TimeZone, Utc};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::exit::Failure;
use crate::svg::{line_plot, Series};
use crate::{CertifyArgs, EnergyArgs, FamilyArgs, PlotArgs, SolveArgs, WeightKind};

/// Explicit flag, then `SOURCE_DATE_EPOCH`, then the wall clock.
pub fn timestamp(flag: Option<String>) -> Result<String, Failure> {
    let fmt = |t: DateTime<Utc>| t.to_rfc3339_opts(SecondsFormat::Secs, true);
    if let Some(s) = flag {
        let t = DateTime::parse_from_rfc3339(&s).map_err(|e| Failure::Invalid(format!("--timestamp {s:?}: {e}")))?;
        return Ok(fmt(t.with_timezone(&Utc)));
    }
    if let Ok(raw) = std::env::var("SOURCE_DATE_EPOCH") {
        let secs: i64 =
            raw.trim().parse().map_err(|_| Failure::Invalid(format!("SOURCE_DATE_EPOCH={raw:?} is not an integer")))?;
        let t = Utc
            .timestamp_opt(secs, 0)
            .single()
            .ok_or_else(|| Failure::Invalid(format!("SOURCE_DATE_EPOCH={raw:?} out of range")))?;
        return Ok(fmt(t));
    }
    Ok(fmt(Utc::now()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_solution(path: &Path) -> Result<SolutionFile, Failure> {
    SolutionFile::load(path).map_err(|e| match e {
        autoconv::Error::Io(io) => Failure::Io(format!("{}: {io}", path.display())),
        other => Failure::from(other),
    })
}

pub fn solve(a: SolveArgs, stamp: &str) -> Result<(), Failure> {
    let mut warm_digest = None;
    let init = match &a.warm_start {
        Some(p) => {
            let prev = load_solution(p)?;
            warm_digest = Some(prev.coeffs.digest());
            Init::Explicit(extend_coefficients(&prev.coeffs, a.t)?)
        }
        None => Init::Zeros,
    };
    let mut config = SolverConfig::new(a.t, a.r).with_init(init).with_grad_tol(a.tol);
    config.rel_obj_tol = a.rel_obj_tol;
    config.max_iterations = a.max_iter;
    config.memory = a.memory;
    let sol = run_solver(&config)?;

    let file = SolutionFile::from_solution(&sol, stamp);
    let text = file.to_text();
    write_file(&a.out, &text)?;
    println!(
        "T={} R={} objective={:.12} grad_norm={:.3e} iterations={} converged={}",
        a.t, a.r, sol.breakdown.total, sol.grad_norm, sol.iterations, sol.converged
    );
    if let Some(path) = &a.report {
        let body = json!({
            "command": "solve",
            "tool_version": TOOL_VERSION,
            "config": {
                "T": a.t,
                "R": a.r,
                "grad_tol": a.tol,
                "rel_obj_tol": a.rel_obj_tol,
                "max_iterations": a.max_iter,
                "memory": a.memory,
                "warm_start_digest": warm_digest,
            },
            "result": {
                "iterations": sol.iterations,
                "evaluations": sol.evaluations,
                "converged": sol.converged,
                "stop_reason": sol.stop_reason,
                "grad_norm": sol.grad_norm,
                "breakdown": sol.breakdown,
            },
            "solution": {
                "coefficients_digest": sol.coeffs.digest(),
                "statistics": sol.coeffs.statistics(),
            },
        });
        write_file(path, &Report::new(stamp, body).to_pretty()?)?;
    }
    if !sol.converged {
        return Err(Failure::NotConverged(format!(
            "iteration cap reached; best iterate written to {}",
            a.out.display()
        )));
    }
    Ok(())
}

pub fn certify(a: CertifyArgs, stamp: &str) -> Result<(), Failure> {
    let file = load_solution(&a.solution)?;
    let f = &file.coeffs;
    let mode = if a.double_double { Accumulation::DoubleDouble } else { Accumulation::Compensated };
    let upper = certify::upper_bound(f, a.n, mode)?;
    let lower = match a.alpha {
        Some(alpha) if !a.optimize_alpha => certify::lower_bound(f, alpha, a.n, mode)?,
        _ => certify::optimize_alpha(f, a.n, (a.alpha_min, a.alpha_max), mode)?.1,
    };
    let width = sandwich_width(&lower, &upper);
    let sigma = sigma_bounds(lower.value).ok();
    println!("upper  {:.10}  (tail {:.3e})", upper.value, upper.tail_budget);
    println!("lower  {:.10}  (alpha {:.6})", lower.value, lower.alpha.unwrap_or(f64::NAN));
    println!("width  {width:.3e}");
    if width < 0.0 {
        log::warn!("lower certificate exceeds upper certificate");
    }
    if let Some(path) = &a.report {
        let body = json!({
            "command": "certify",
            "tool_version": TOOL_VERSION,
            "solution": {
                "T": f.degree(),
                "R": file.r,
                "objective_total": file.objective_total,
                "coefficients_digest": f.digest(),
                "statistics": f.statistics(),
            },
            "N": a.n,
            "accumulation": mode,
            "upper": upper,
            "lower": lower,
            "alpha": lower.alpha,
            "sandwich_width": width,
            "sandwich_ok": width >= 0.0,
            "sigma_bounds": sigma,
        });
        write_file(path, &Report::new(stamp, body).to_pretty()?)?;
    }
    Ok(())
}

pub fn family(a: FamilyArgs) -> Result<(), Failure> {
    let final_k = |c: f64| -> Result<usize, Failure> {
        match a.k {
            Some(k) => Ok(k),
            None => Ok(terms_for_tail(c, a.tail_target)?),
        }
    };
    let mut csv = String::from("c,value,tail\n");
    if a.steps == 1 {
        let k = final_k(a.c_min)?;
        let (value, tail) = family_norm(a.c_min, k)?;
        let _ = writeln!(csv, "{},{},{}", a.c_min, value, tail);
        println!("c={} value={value:.10} tail={tail:.3e} K={k}", a.c_min);
        return emit_csv(a.out_csv.as_deref(), &csv);
    }
    let k_scan = a.k.unwrap_or(family::OPTIMIZE_K);
    let points = family_scan(a.c_min, a.c_max, a.steps, k_scan)?;
    for p in &points {
        let _ = writeln!(csv, "{},{},{}", p.c, p.value, p.tail);
    }
    let values: Vec<f64> = points.iter().map(|p| p.value).collect();
    if local_minima(&values) > 1 {
        log::warn!("scan has several local minima; refining around the lowest sample");
    }
    let best = values.iter().enumerate().min_by(|x, y| x.1.total_cmp(y.1)).map(|(i, _)| i).unwrap_or(0);
    let lo = points[best.saturating_sub(1)].c;
    let hi = points[(best + 1).min(points.len() - 1)].c;
    let c_star = if hi > lo { optimize_c((lo, hi), k_scan)?.0 } else { lo };
    let k = final_k(c_star)?;
    let (value, tail) = family_norm(c_star, k)?;
    println!("best c={c_star:.5} value={value:.10} tail={tail:.3e} K={k}");
    emit_csv(a.out_csv.as_deref(), &csv)
}

fn emit_csv(path: Option<&Path>, csv: &str) -> Result<(), Failure> {
    match path {
        Some(p) => write_file(p, csv),
        None => Ok(()),
    }
}

pub fn plot_data(a: PlotArgs) -> Result<(), Failure> {
    if a.grid_points < 2 {
        return Err(Failure::Invalid("--grid-points must be at least 2".into()));
    }
    let file = load_solution(&a.solution)?;
    let f = &file.coeffs;
    let n = a.grid_points;
    let xs: Vec<f64> = (0..n).map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64).collect();
    let fx: Vec<f64> = xs.iter().map(|&x| f.eval_extended(x)).collect();
    let conv = autoconvolution_curve(f, &xs)?;
    let mut csv = String::from("x,f,autoconvolution\n");
    for i in 0..n {
        let _ = writeln!(csv, "{},{},{}", xs[i], fx[i], conv[i]);
    }
    match &a.out_csv {
        Some(p) => write_file(p, &csv)?,
        None if a.out_svg.is_none() => print!("{csv}"),
        None => {}
    }
    if let Some(p) = &a.out_svg {
        let svg = line_plot(
            &xs,
            &[Series { label: "f", color: "#1f77b4", ys: &fx }, Series { label: "f*f", color: "#ff7f0e", ys: &conv }],
        );
        write_file(p, &svg)?;
    }
    Ok(())
}

pub fn energy(a: EnergyArgs) -> Result<(), Failure> {
    if a.n == 0 {
        return Err(Failure::Invalid("--N must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut csv = String::from("trial,N,energy,bound,ratio\n");
    let mut worst = f64::INFINITY;
    for trial in 0..a.trials {
        let h = match a.weights {
            WeightKind::Uniform => WeightSequence::uniform(a.n)?,
            WeightKind::Nonnegative => WeightSequence::random_nonnegative(a.n, &mut rng)?,
            WeightKind::Signed => WeightSequence::random_signed(a.n, &mut rng)?,
        };
        let r = additive_energy_against(&h, a.mu2_lower);
        worst = worst.min(r.ratio);
        let _ = writeln!(csv, "{trial},{},{},{},{}", r.n, r.energy, r.bound, r.ratio);
    }
    emit_csv(a.out_csv.as_deref(), &csv)?;
    if a.out_csv.is_none() {
        print!("{csv}");
    }
    println!("trials={} N={} min_ratio={worst}", a.trials, a.n);
    if worst < 1.0 {
        return Err(Failure::EnergyViolation(format!("energy fell below mu2*N^3 (ratio {worst})")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn timestamp_flag_is_normalized_to_utc() {
        assert_eq!(timestamp(Some("2020-05-01T12:00:00+02:00".into())).unwrap(), "2020-05-01T10:00:00Z");
        assert!(timestamp(Some("yesterday".into())).is_err());
    }
}
