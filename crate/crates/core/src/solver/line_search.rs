//! Nonmonotone backtracking for a maximization problem.
//!
//! A trial step `lambda` is accepted once
//! `phi(lambda) >= g_ref + gamma * lambda * slope`, where `g_ref` is the
//! smallest objective value among the last `M` iterates and `slope` is the
//! directional derivative `phi'(0) = grad g . d`.

use super::SolverConfig;
use crate::linalg::SymMat;
use crate::model::{make_iterate, DualIterate, ProblemInstance};
use crate::solver::project_box;

#[derive(Debug, Clone)]
pub struct Accepted<T> {
    pub lambda: f64,
    pub value: f64,
    pub point: T,
    pub inner_steps: usize,
}

/// No trial satisfied the acceptance test within `max_inner` attempts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stalled {
    pub last_lambda: f64,
}

/// Backtracks along a ray starting at `lambda_bar`.
///
/// `trial(lambda)` returns the objective at the trial point and the point
/// itself, or `None` when the point could not be evaluated (treated like a
/// failed acceptance test). Successive trials come from maximizing the
/// quadratic through `phi(0)`, `phi'(0)` and `phi(lambda_j)`, clipped to
/// `[sigma1 lambda_j, sigma2 lambda_j]`; a degenerate interpolant halves.
pub fn nonmonotone_backtrack<T>(
    mut trial: impl FnMut(f64) -> Option<(f64, T)>,
    phi0: f64,
    slope: f64,
    g_ref: f64,
    lambda_bar: f64,
    cfg: &SolverConfig,
) -> Result<Accepted<T>, Stalled> {
    let mut lambda = lambda_bar;
    for j in 1..=cfg.max_inner {
        match trial(lambda) {
            Some((value, point)) if value >= g_ref + cfg.gamma * lambda * slope => {
                return Ok(Accepted {
                    lambda,
                    value,
                    point,
                    inner_steps: j,
                });
            }
            Some((value, _)) => lambda = next_trial(phi0, slope, lambda, value, cfg),
            None => lambda = next_trial(phi0, slope, lambda, f64::NEG_INFINITY, cfg),
        }
    }
    Err(Stalled { last_lambda: lambda })
}

fn next_trial(phi0: f64, slope: f64, lambda: f64, phi_lambda: f64, cfg: &SolverConfig) -> f64 {
    // phi(t) ~ phi0 + slope t + curv t^2
    let curv = (phi_lambda - phi0 - slope * lambda) / (lambda * lambda);
    let candidate = if curv.is_finite() && curv < 0.0 {
        -slope / (2.0 * curv)
    } else {
        f64::NAN
    };
    if candidate.is_finite() {
        candidate.clamp(cfg.sigma1 * lambda, cfg.sigma2 * lambda)
    } else {
        0.5 * lambda
    }
}

/// Runs the backtracking on the dual objective from `it` along `(dy, dw)`.
///
/// `history` holds the objective values of the most recent iterates (at
/// most `M`, the current one included). Returns the accepted step and the
/// new iterate.
#[allow(clippy::too_many_arguments)]
pub fn nonmonotone_line_search(
    inst: &ProblemInstance,
    it: &DualIterate,
    dy: &[f64],
    dw: &SymMat,
    lambda_bar: f64,
    slope: f64,
    history: &[f64],
    cfg: &SolverConfig,
) -> Result<Accepted<DualIterate>, Stalled> {
    let g_ref = history.iter().copied().fold(f64::INFINITY, f64::min);
    let trial = |lambda: f64| {
        let y: Vec<f64> = it.y().iter().zip(dy).map(|(y, d)| y + lambda * d).collect();
        // The clamp only removes roundoff: W + lambda dW is a convex
        // combination of two points inside the box.
        let w = project_box(&it.w().axpy(lambda, dw), inst.rho());
        make_iterate(inst, y, w).ok().map(|next| (next.g_val(), next))
    };
    nonmonotone_backtrack(trial, it.g_val(), slope, g_ref, lambda_bar, cfg)
}
