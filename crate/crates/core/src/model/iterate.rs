use super::ProblemInstance;
use crate::error::{Error, Infeasibility, Result};
use crate::linalg::norms::{pair_inf, vec_inf};
use crate::linalg::{cholesky, inverse_from_factor, logdet_from_factor, CholeskyFactor, SymMat};

/// Slack allowed on `|W_ij| <= rho_ij` when validating a supplied point.
pub const BOX_TOLERANCE: f64 = 1e-12;

/// A strictly feasible dual point with everything the solver needs cached.
#[derive(Debug, Clone)]
pub struct DualIterate {
    y: Vec<f64>,
    w: SymMat,
    z_factor: CholeskyFactor,
    x: SymMat,
    ax: Vec<f64>,
    g_val: f64,
}

impl DualIterate {
    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn w(&self) -> &SymMat {
        &self.w
    }

    /// Cholesky factor of `Z = C + W - A^T(y)`.
    pub fn z_factor(&self) -> &CholeskyFactor {
        &self.z_factor
    }

    /// `X(y, W) = mu Z^{-1}`.
    pub fn x(&self) -> &SymMat {
        &self.x
    }

    /// `A(X(y, W))`.
    pub fn ax(&self) -> &[f64] {
        &self.ax
    }

    pub fn g_val(&self) -> f64 {
        self.g_val
    }
}

/// Validates `(y, W)` and builds the iterate.
///
/// Fails with [`Infeasibility::BoxViolated`] when some `|W_ij|` exceeds
/// `rho_ij + BOX_TOLERANCE`, and with [`Infeasibility::NotPositiveDefinite`]
/// when `C + W - A^T(y)` does not factor.
pub fn make_iterate(inst: &ProblemInstance, y: Vec<f64>, w: SymMat) -> Result<DualIterate> {
    let n = inst.dim();
    if w.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: w.dim(),
        });
    }
    if y.len() != inst.map().len() {
        return Err(Error::DimensionMismatch {
            expected: inst.map().len(),
            found: y.len(),
        });
    }
    let rho = inst.rho();
    for (i, j, v) in w.upper_entries() {
        let bound = rho.get(i, j);
        if v.abs() > bound + BOX_TOLERANCE {
            return Err(Infeasibility::BoxViolated {
                i: i + 1,
                j: j + 1,
                value: v.abs(),
                bound,
            }
            .into());
        }
    }
    let z = inst.c().add(&w).sub(&inst.map().apply_adjoint(&y));
    let z_factor = match cholesky(&z) {
        Ok(f) => f,
        Err(Error::NotPositiveDefinite { pivot }) => {
            return Err(Infeasibility::NotPositiveDefinite { pivot }.into())
        }
        Err(e) => return Err(e),
    };
    let mu = inst.mu();
    let x = inverse_from_factor(&z_factor).scale(mu);
    let ax = inst.map().apply(&x);
    let g_val = dual_value(inst, &y, &z_factor);
    Ok(DualIterate {
        y,
        w,
        z_factor,
        x,
        ax,
        g_val,
    })
}

fn dual_value(inst: &ProblemInstance, y: &[f64], z_factor: &CholeskyFactor) -> f64 {
    let mu = inst.mu();
    let n = inst.dim() as f64;
    let by: f64 = inst.map().b().iter().zip(y).map(|(b, y)| b * y).sum();
    by + mu * logdet_from_factor(z_factor) + n * mu - n * mu * mu.ln()
}

/// `g(y, W) = b^T y + mu log det(C + W - A^T(y)) + n mu - n mu log mu`.
pub fn dual_objective(inst: &ProblemInstance, it: &DualIterate) -> f64 {
    dual_value(inst, &it.y, &it.z_factor)
}

/// `grad g(y, W) = (b - A(X), X)` with `X = X(y, W)`.
pub fn dual_gradient(inst: &ProblemInstance, it: &DualIterate) -> (Vec<f64>, SymMat) {
    (gradient_y(inst, it), it.x.clone())
}

pub(crate) fn gradient_y(inst: &ProblemInstance, it: &DualIterate) -> Vec<f64> {
    inst.map().b().iter().zip(&it.ax).map(|(b, a)| b - a).collect()
}

fn penalty(inst: &ProblemInstance, x: &SymMat) -> f64 {
    inst.rho()
        .as_slice()
        .iter()
        .zip(x.as_slice())
        .map(|(r, v)| r * v.abs())
        .sum()
}

/// `f(X) = Tr(C X) - mu log det X + sum_ij rho_ij |X_ij|`.
///
/// `X` must factor; a failure is reported as [`Error::NotPositiveDefinite`].
pub fn primal_objective(inst: &ProblemInstance, x: &SymMat) -> Result<f64> {
    let f = cholesky(x)?;
    Ok(inst.c().dot(x) - inst.mu() * logdet_from_factor(&f) + penalty(inst, x))
}

/// The primal point `X(y, W)`, optionally with the zero pattern enforced.
pub fn recover_primal(inst: &ProblemInstance, it: &DualIterate, cleanup: bool) -> SymMat {
    let mut x = it.x.clone();
    if cleanup {
        if let Some(pattern) = inst.zero_pattern() {
            for &(i, j) in pattern {
                x.set(i, j, 0.0);
            }
        }
    }
    x
}

/// Optimality diagnostics at a dual iterate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KktResiduals {
    /// `|(dy, dW)|_inf` of the unit-length projected gradient step.
    pub direction_inf: f64,
    /// `|A(X) - b|_inf`.
    pub primal_feas: f64,
    /// `g(y, W) - f(X)`, signed.
    pub gap: f64,
    /// `|rho . |X| - W . X|`.
    pub compl: f64,
}

pub fn kkt_residuals(inst: &ProblemInstance, it: &DualIterate) -> KktResiduals {
    let grad_y = gradient_y(inst, it);
    let rho = inst.rho();
    let mut dw = SymMat::zeros(inst.dim());
    for (i, j, wij) in it.w.upper_entries() {
        let r = rho.get(i, j);
        let target = (wij + it.x.get(i, j)).clamp(-r, r);
        dw.set(i, j, target - wij);
    }
    let direction_inf = pair_inf(&grad_y, &dw);
    let primal_feas = vec_inf(&grad_y);

    // log det X = n log mu - log det Z, so X need not be refactored.
    let mu = inst.mu();
    let n = inst.dim() as f64;
    let logdet_x = n * mu.ln() - logdet_from_factor(&it.z_factor);
    let rho_abs_x = penalty(inst, &it.x);
    let f = inst.c().dot(&it.x) - mu * logdet_x + rho_abs_x;
    KktResiduals {
        direction_inf,
        primal_feas,
        gap: it.g_val - f,
        compl: (rho_abs_x - it.w.dot(&it.x)).abs(),
    }
}
