//! Text format for solved coefficient vectors.
//!
//! ```text
//! AUTOCONV-SOLUTION v1
//! T=3
//! R=4000
//! objective_total=5.7594...e-1
//! grad_norm=...
//! created_utc=2026-01-01T00:00:00Z
//! tool_version=0.1.0
//! 1 -2.9764713500000000e-1
//! 2 ...
//! ```
//!
//! Coefficients are written with 17 significant digits, which round-trips
//! every binary64 value exactly. Unknown metadata keys are kept in order and
//! written back after the known ones.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::solver::FourierSolution;
use crate::spectral::FourierCoefficients;

pub const HEADER: &str = "AUTOCONV-SOLUTION v1";
const MAGIC: &str = "AUTOCONV-SOLUTION";

#[derive(Clone, Debug, PartialEq)]
pub struct SolutionFile {
    pub r: usize,
    pub objective_total: f64,
    pub grad_norm: f64,
    pub created_utc: String,
    pub tool_version: String,
    pub extra: Vec<(String, String)>,
    pub coeffs: FourierCoefficients,
}

impl SolutionFile {
    pub fn from_solution(sol: &FourierSolution, created_utc: impl Into<String>) -> Self {
        Self {
            r: sol.r,
            objective_total: sol.breakdown.total,
            grad_norm: sol.grad_norm,
            created_utc: created_utc.into(),
            tool_version: super::TOOL_VERSION.to_string(),
            extra: vec![
                ("iterations".into(), sol.iterations.to_string()),
                ("converged".into(), sol.converged.to_string()),
            ],
            coeffs: sol.coeffs.clone(),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.degree()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(64 + 32 * self.degree());
        s.push_str(HEADER);
        s.push('\n');
        let _ = writeln!(s, "T={}", self.degree());
        let _ = writeln!(s, "R={}", self.r);
        let _ = writeln!(s, "objective_total={:.16e}", self.objective_total);
        let _ = writeln!(s, "grad_norm={:.16e}", self.grad_norm);
        let _ = writeln!(s, "created_utc={}", self.created_utc);
        let _ = writeln!(s, "tool_version={}", self.tool_version);
        for (k, v) in &self.extra {
            let _ = writeln!(s, "{k}={v}");
        }
        for (i, c) in self.coeffs.values().iter().enumerate() {
            let _ = writeln!(s, "{} {:.16e}", i + 1, c);
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
        let (_, head) = lines.next().ok_or(Error::Parse { line: 1, message: "empty file".into() })?;
        if head != HEADER {
            if head.starts_with(MAGIC) {
                return Err(Error::UnsupportedVersion(head.to_string()));
            }
            return Err(Error::Parse { line: 1, message: format!("expected {HEADER:?}") });
        }
        let mut t = None;
        let mut r = None;
        let mut objective_total = None;
        let mut grad_norm = None;
        let mut created_utc = None;
        let mut tool_version = None;
        let mut extra = Vec::new();
        let mut coeffs = Vec::new();
        for (n, line) in lines {
            if line.is_empty() {
                continue;
            }
            let bad = |message: String| Error::Parse { line: n, message };
            if let Some((key, value)) = line.split_once('=') {
                if !coeffs.is_empty() {
                    return Err(bad("metadata after coefficients".into()));
                }
                let num = |v: &str| v.parse::<f64>().map_err(|e| bad(format!("{key}: {e}")));
                let int = |v: &str| v.parse::<usize>().map_err(|e| bad(format!("{key}: {e}")));
                match key {
                    "T" => t = Some(int(value)?),
                    "R" => r = Some(int(value)?),
                    "objective_total" => objective_total = Some(num(value)?),
                    "grad_norm" => grad_norm = Some(num(value)?),
                    "created_utc" => created_utc = Some(value.to_string()),
                    "tool_version" => tool_version = Some(value.to_string()),
                    _ => extra.push((key.to_string(), value.to_string())),
                }
                continue;
            }
            let (idx, val) = line.split_once(' ').ok_or_else(|| bad("expected `k coefficient`".into()))?;
            let idx: usize = idx.parse().map_err(|e| bad(format!("index: {e}")))?;
            if idx != coeffs.len() + 1 {
                return Err(bad(format!("expected index {}, found {idx}", coeffs.len() + 1)));
            }
            let v: f64 = val.trim().parse().map_err(|e| bad(format!("coefficient: {e}")))?;
            coeffs.push(v);
        }
        let missing = |k: &str| Error::Parse { line: 0, message: format!("missing {k}") };
        let t = t.ok_or_else(|| missing("T"))?;
        if t != coeffs.len() {
            return Err(Error::Parse { line: 0, message: format!("T={t} but {} coefficients", coeffs.len()) });
        }
        Ok(Self {
            r: r.ok_or_else(|| missing("R"))?,
            objective_total: objective_total.ok_or_else(|| missing("objective_total"))?,
            grad_norm: grad_norm.ok_or_else(|| missing("grad_norm"))?,
            created_utc: created_utc.ok_or_else(|| missing("created_utc"))?,
            tool_version: tool_version.ok_or_else(|| missing("tool_version"))?,
            extra,
            coeffs: FourierCoefficients::new(coeffs)?,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}
