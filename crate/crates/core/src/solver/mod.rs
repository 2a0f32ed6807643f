//! Dual spectral projected gradient method.
//!
//! Each outer iteration computes the unit-length projected gradient step for
//! the stopping test, a second projected gradient step scaled by the current
//! Barzilai-Borwein length, caps the step fraction so `C + W - A^T(y)` stays
//! positive definite, backtracks nonmonotonically, and updates the length.

mod line_search;
mod step;

use std::collections::VecDeque;
use std::time::{Duration, Instant};

pub use line_search::{nonmonotone_backtrack, nonmonotone_line_search, Accepted, Stalled};
pub use step::{bb_update, max_feasible_step, project_box, search_direction};

use crate::error::{Error, Result};
use crate::linalg::norms::{pair_dot, pair_inf, pair_norm};
use crate::linalg::SymMat;
use crate::model::{
    gradient_y, kkt_residuals, make_iterate, primal_objective, recover_primal, DualIterate, KktResiduals,
    ProblemInstance,
};

/// Every record is kept up to this iteration; past it only every tenth.
pub const TRACE_FULL_LIMIT: usize = 5000;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Stop once `|(dy_1, dW_1)|_inf <= eps`.
    pub eps: f64,
    pub gamma: f64,
    pub tau: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub alpha0: f64,
    /// Nonmonotone memory `M`.
    pub window_m: usize,
    pub max_outer: usize,
    pub max_inner: usize,
    /// Zero the constrained pattern in the recovered primal point.
    pub cleanup: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            eps: 1e-5,
            gamma: 1e-4,
            tau: 0.5,
            sigma1: 0.1,
            sigma2: 0.9,
            alpha_min: 1e-15,
            alpha_max: 1e15,
            alpha0: 1.0,
            window_m: 50,
            max_outer: 20_000,
            max_inner: 60,
            cleanup: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let open_unit = |v: f64| v > 0.0 && v < 1.0;
        let bad = |what: &str| Err(Error::Validation(format!("solver config: {what}")));
        if self.eps.is_nan() || self.eps < 0.0 {
            return bad("eps must be >= 0");
        }
        if !open_unit(self.gamma) {
            return bad("gamma must lie in (0, 1)");
        }
        if !open_unit(self.tau) {
            return bad("tau must lie in (0, 1)");
        }
        if !(self.sigma1 > 0.0 && self.sigma1 < self.sigma2 && self.sigma2 < 1.0) {
            return bad("need 0 < sigma1 < sigma2 < 1");
        }
        if !(self.alpha_min > 0.0 && self.alpha_min < self.alpha_max && self.alpha_max.is_finite()) {
            return bad("need 0 < alpha_min < alpha_max < inf");
        }
        if !(self.alpha0 >= self.alpha_min && self.alpha0 <= self.alpha_max) {
            return bad("alpha0 must lie in [alpha_min, alpha_max]");
        }
        if self.window_m == 0 {
            return bad("window_m must be >= 1");
        }
        if self.max_inner == 0 {
            return bad("max_inner must be >= 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    MaxOuterReached,
    LineSearchStalled,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Converged => "converged",
            SolveStatus::MaxOuterReached => "max_outer_reached",
            SolveStatus::LineSearchStalled => "line_search_stalled",
        }
    }
}

/// One outer iteration, from iterate `k` to iterate `k + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    /// `g` at iterate `k`.
    pub g_val: f64,
    /// `|(dy_1, dW_1)|_inf` at iterate `k`.
    pub direction_inf: f64,
    /// `|(dy_1, dW_1)|`.
    pub direction1_norm: f64,
    pub alpha: f64,
    pub theta: f64,
    pub lambda_bar: f64,
    pub lambda: f64,
    pub inner_steps: usize,
    /// `grad g . (dy, dW)`.
    pub ascent_lhs: f64,
    /// `|(dy, dW)|`.
    pub direction_norm: f64,
    /// Minimum of `g` over the nonmonotone window.
    pub g_ref: f64,
    /// `g` at iterate `k + 1`.
    pub g_next: f64,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub status: SolveStatus,
    /// Index of the final iterate (number of completed outer iterations).
    pub iterations: usize,
    pub y: Vec<f64>,
    pub w: SymMat,
    /// Recovered primal point, zero pattern enforced when requested.
    pub x: SymMat,
    /// `false` when enforcing the zero pattern destroyed positive
    /// definiteness; `x` and `primal_obj` then come from the raw `X(y, W)`.
    pub cleanup_preserved_pd: bool,
    pub primal_obj: f64,
    pub dual_obj: f64,
    /// `dual_obj - primal_obj`; nonpositive for a primal-feasible `x`.
    pub gap: f64,
    pub kkt: KktResiduals,
    pub trace: Vec<IterationRecord>,
    /// Smallest accepted step fraction over the run.
    pub min_lambda: f64,
    pub wall_time: Duration,
}

/// Solves from `init`, or from `(0, O)` when `None`.
///
/// Only an unusable starting point is an error; iteration limits and line
/// search failures are reported through [`SolveReport::status`].
pub fn solve(
    inst: &ProblemInstance,
    init: Option<(Vec<f64>, SymMat)>,
    cfg: &SolverConfig,
) -> Result<SolveReport> {
    solve_observed(inst, init, cfg, |_, _| {})
}

/// [`solve`] with a callback invoked on every visited iterate `k`.
pub fn solve_observed(
    inst: &ProblemInstance,
    init: Option<(Vec<f64>, SymMat)>,
    cfg: &SolverConfig,
    mut observe: impl FnMut(usize, &DualIterate),
) -> Result<SolveReport> {
    cfg.validate()?;
    let start = Instant::now();
    let (y0, w0) = init.unwrap_or_else(|| (vec![0.0; inst.map().len()], SymMat::zeros(inst.dim())));
    let mut it = make_iterate(inst, y0, w0)?;

    let mut alpha = cfg.alpha0;
    let mut history: VecDeque<f64> = VecDeque::with_capacity(cfg.window_m);
    let mut trace = Vec::new();
    let mut min_lambda = f64::INFINITY;
    let mut k = 0;

    let status = loop {
        observe(k, &it);
        if history.len() == cfg.window_m {
            history.pop_front();
        }
        history.push_back(it.g_val());

        let (dy1, dw1) = search_direction(inst, &it, 1.0);
        let direction_inf = pair_inf(&dy1, &dw1);
        if direction_inf <= cfg.eps {
            break SolveStatus::Converged;
        }
        if k >= cfg.max_outer {
            break SolveStatus::MaxOuterReached;
        }

        let (dy, dw) = search_direction(inst, &it, alpha);
        let (grad_y, grad_w) = (gradient_y(inst, &it), it.x());
        let slope = pair_dot(&grad_y, grad_w, &dy, &dw);
        let (lambda_bar, theta) = max_feasible_step(inst, &it, &dy, &dw, cfg.tau);
        let history_slice: Vec<f64> = history.iter().copied().collect();
        let accepted =
            match nonmonotone_line_search(inst, &it, &dy, &dw, lambda_bar, slope, &history_slice, cfg) {
                Ok(a) => a,
                Err(_) => break SolveStatus::LineSearchStalled,
            };
        let next = accepted.point;

        // s1 = step actually taken, s2 = change of gradient
        let s1_y: Vec<f64> = next.y().iter().zip(it.y()).map(|(a, b)| a - b).collect();
        let s1_w = next.w().sub(it.w());
        let s2_y: Vec<f64> = gradient_y(inst, &next)
            .iter()
            .zip(&grad_y)
            .map(|(a, b)| a - b)
            .collect();
        let s2_w = next.x().sub(grad_w);
        let next_alpha = bb_update((&s1_y, &s1_w), (&s2_y, &s2_w), cfg);

        if k < TRACE_FULL_LIMIT || k % 10 == 0 {
            trace.push(IterationRecord {
                k,
                g_val: it.g_val(),
                direction_inf,
                direction1_norm: pair_norm(&dy1, &dw1),
                alpha,
                theta,
                lambda_bar,
                lambda: accepted.lambda,
                inner_steps: accepted.inner_steps,
                ascent_lhs: slope,
                direction_norm: pair_norm(&dy, &dw),
                g_ref: history_slice.iter().copied().fold(f64::INFINITY, f64::min),
                g_next: next.g_val(),
            });
        }
        min_lambda = min_lambda.min(accepted.lambda);
        alpha = next_alpha;
        it = next;
        k += 1;
    };

    let kkt = kkt_residuals(inst, &it);
    let dual_obj = it.g_val();
    let cleaned = recover_primal(inst, &it, cfg.cleanup);
    let (x, primal_obj, cleanup_preserved_pd) = match primal_objective(inst, &cleaned) {
        Ok(f) => (cleaned, f, true),
        Err(_) => {
            let raw = recover_primal(inst, &it, false);
            let f = primal_objective(inst, &raw).unwrap_or(dual_obj - kkt.gap);
            (raw, f, false)
        }
    };
    Ok(SolveReport {
        status,
        iterations: k,
        y: it.y().to_vec(),
        w: it.w().clone(),
        x,
        cleanup_preserved_pd,
        primal_obj,
        dual_obj,
        gap: dual_obj - primal_obj,
        kkt,
        trace,
        min_lambda,
        wall_time: start.elapsed(),
    })
}
