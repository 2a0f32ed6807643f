use super::SolverConfig;
use crate::linalg::norms::pair_dot;
use crate::linalg::{min_eig_congruence, SymMat};
use crate::model::{DualIterate, ProblemInstance};

/// Element-wise clamp of `w` into `[-rho_ij, rho_ij]`.
pub fn project_box(w: &SymMat, rho: &SymMat) -> SymMat {
    assert_eq!(w.dim(), rho.dim());
    let n = w.dim();
    let mut out = SymMat::zeros(n);
    for (i, j, v) in w.upper_entries() {
        let r = rho.get(i, j);
        out.set(i, j, v.max(-r).min(r));
    }
    out
}

/// Projected gradient direction of length parameter `alpha`:
/// `(alpha (b - A(X)), [W + alpha X]_rho - W)`.
pub fn search_direction(inst: &ProblemInstance, it: &DualIterate, alpha: f64) -> (Vec<f64>, SymMat) {
    let dy = inst
        .map()
        .b()
        .iter()
        .zip(it.ax())
        .map(|(b, a)| alpha * (b - a))
        .collect();
    let dw = project_box(&it.w().axpy(alpha, it.x()), inst.rho()).sub(it.w());
    (dy, dw)
}

/// Largest step fraction `lambda_bar` in `(0, 1]` that keeps
/// `Z(lambda) >= (1 - tau) Z(0)`, together with the eigenvalue `theta` it
/// was derived from.
pub fn max_feasible_step(
    inst: &ProblemInstance,
    it: &DualIterate,
    dy: &[f64],
    dw: &SymMat,
    tau: f64,
) -> (f64, f64) {
    let dz = dw.sub(&inst.map().apply_adjoint(dy));
    let theta = min_eig_congruence(it.z_factor(), &dz);
    (step_bound(theta, tau), theta)
}

pub(crate) fn step_bound(theta: f64, tau: f64) -> f64 {
    if theta >= 0.0 {
        1.0
    } else {
        (-tau / theta).min(1.0)
    }
}

/// Barzilai-Borwein projection length from the iterate displacement `s1`
/// and the gradient displacement `s2`.
pub fn bb_update(s1: (&[f64], &SymMat), s2: (&[f64], &SymMat), cfg: &SolverConfig) -> f64 {
    let b = pair_dot(s1.0, s1.1, s2.0, s2.1);
    bb_from_products(pair_dot(s1.0, s1.1, s1.0, s1.1), b, cfg)
}

pub(crate) fn bb_from_products(a: f64, b: f64, cfg: &SolverConfig) -> f64 {
    if b >= 0.0 {
        cfg.alpha_max
    } else {
        (-a / b).max(cfg.alpha_min).min(cfg.alpha_max)
    }
}
