//! Solve reports, warm-start iterates and iteration traces.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{read_text, write_text};
use crate::error::{Error, Result};
use crate::linalg::norms::vec_inf;
use crate::linalg::SymMat;
use crate::solver::{IterationRecord, SolveReport};

/// Significant digits of the objective values written to reports.
pub const REPORT_DIGITS: usize = 12;

/// `x` rounded to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .expect("formatted float parses")
}

/// A dual point `(y, W)`; `w` lists the nonzero upper-triangle entries as
/// `[i, j, value]`, 1-based. Used both as the report's final iterate and as
/// a warm-start file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IterateFile {
    pub y: Vec<f64>,
    pub w: Vec<(usize, usize, f64)>,
}

impl IterateFile {
    pub fn new(y: &[f64], w: &SymMat) -> Self {
        Self {
            y: y.to_vec(),
            w: w
                .upper_entries()
                .filter(|e| e.2 != 0.0)
                .map(|(i, j, v)| (i + 1, j + 1, v))
                .collect(),
        }
    }

    /// Converts to `(y, W)` after checking the shapes against `n` and `m`.
    pub fn into_point(self, n: usize, m: usize) -> Result<(Vec<f64>, SymMat)> {
        if self.y.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: self.y.len(),
            });
        }
        let mut w = SymMat::zeros(n);
        for (i, j, v) in self.w {
            if !(1 <= i && i <= j && j <= n) {
                return Err(Error::Validation(format!(
                    "iterate entry ({i}, {j}) outside 1 <= i <= j <= {n}"
                )));
            }
            if !v.is_finite() {
                return Err(Error::NonFinite { i, j });
            }
            w.set(i - 1, j - 1, v);
        }
        Ok((self.y, w))
    }
}

pub fn write_iterate(path: &Path, it: &IterateFile) -> Result<()> {
    write_json(path, it)
}

pub fn read_iterate(path: &Path) -> Result<IterateFile> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        message: e.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KktSummary {
    pub direction_inf: f64,
    pub primal_feasibility: f64,
    pub gap: f64,
    pub complementarity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub status: String,
    pub iterations: usize,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub gap: f64,
    pub kkt: KktSummary,
    /// Smallest accepted step; absent when no step was taken.
    pub min_lambda: Option<f64>,
    pub y_inf_norm: f64,
    pub cleanup_preserved_pd: bool,
    pub wall_time_s: f64,
    pub final_iterate: IterateFile,
}

impl ReportFile {
    pub fn new(r: &SolveReport) -> Self {
        let sig = |x: f64| round_sig(x, REPORT_DIGITS);
        Self {
            status: r.status.as_str().to_owned(),
            iterations: r.iterations,
            primal_objective: sig(r.primal_obj),
            dual_objective: sig(r.dual_obj),
            gap: sig(r.gap),
            kkt: KktSummary {
                direction_inf: r.kkt.direction_inf,
                primal_feasibility: r.kkt.primal_feas,
                gap: r.kkt.gap,
                complementarity: r.kkt.compl,
            },
            min_lambda: r.min_lambda.is_finite().then_some(r.min_lambda),
            y_inf_norm: vec_inf(&r.y),
            cleanup_preserved_pd: r.cleanup_preserved_pd,
            wall_time_s: r.wall_time.as_secs_f64(),
            final_iterate: IterateFile::new(&r.y, &r.w),
        }
    }
}

pub fn write_report(path: &Path, report: &SolveReport) -> Result<()> {
    write_json(path, &ReportFile::new(report))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| {
        Error::Validation(format!("{}: cannot serialize: {e}", path.display()))
    })?;
    text.push('\n');
    write_text(path, &text)
}

/// Per-iteration CSV with columns `k,g,direction_inf,alpha,lambda,inner_steps`.
pub fn trace_csv(trace: &[IterationRecord]) -> String {
    let mut out = String::from("k,g,direction_inf,alpha,lambda,inner_steps\n");
    for r in trace {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.k, r.g_val, r.direction_inf, r.alpha, r.lambda, r.inner_steps
        )
        .expect("writing to a String");
    }
    out
}

pub fn write_trace(path: &Path, trace: &[IterationRecord]) -> Result<()> {
    write_text(path, &trace_csv(trace))
}
