//! Recovery quality of an estimated precision matrix `X` against the truth
//! `Sigma^{-1}`.

use crate::error::{Error, Result};
use crate::linalg::{cholesky, inverse_from_factor, matmul, symmetric_eigenvalues, SymMat};

/// Magnitude at or above which an entry of `X` counts as nonzero.
pub const DEFAULT_THRESHOLD: f64 = 0.05;

/// Normalized entropy loss `(1/n) (tr(Sigma X) - log det(Sigma X) - n)`.
///
/// Evaluated as `(1/n) sum_i (l_i - 1 - ln l_i)` over the eigenvalues `l_i`
/// of `L^T X L` with `Sigma = L L^T`, which share the spectrum of
/// `Sigma X`. Every term is nonnegative.
pub fn entropy_loss(sigma: &SymMat, x: &SymMat) -> Result<f64> {
    check_dims(sigma, x)?;
    let n = sigma.dim();
    let s = cholesky(sigma)?.outer_congruence(x);
    let ev = symmetric_eigenvalues(&s);
    if ev.first().is_some_and(|&l| l <= 0.0) {
        // report the pivot where the product's symmetrized form breaks down
        cholesky(&s)?;
        return Err(Error::NotPositiveDefinite { pivot: 1 });
    }
    let sum: f64 = ev.iter().map(|&l| (l - 1.0) - l.ln()).sum();
    Ok(sum / n as f64)
}

/// `(1/n) ||Sigma X - I||_F`.
pub fn quadratic_loss(sigma: &SymMat, x: &SymMat) -> Result<f64> {
    check_dims(sigma, x)?;
    let n = sigma.dim();
    let p = matmul(sigma, x);
    let mut sq = 0.0;
    for i in 0..n {
        for j in 0..n {
            let d = p[i * n + j] - if i == j { 1.0 } else { 0.0 };
            sq += d * d;
        }
    }
    Ok(sq.sqrt() / n as f64)
}

/// Confusion counts over the off-diagonal pairs `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportScores {
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    pub fn_: usize,
    /// `tp / (tp + fn)`, or 1 when the truth has no off-diagonal nonzeros.
    pub sensitivity: f64,
    /// `tn / (tn + fp)`, or 1 when the truth has no off-diagonal zeros.
    pub specificity: f64,
    /// Entries of `X` (all `n^2`, diagonal included) with `|X_ij| >= threshold`.
    pub nnz: usize,
    pub threshold: f64,
}

/// Support recovery of `x` against `truth`: an entry of the truth is
/// nonzero when it is exactly nonzero, an entry of `x` when its magnitude
/// reaches `threshold`. The diagonal is excluded from the confusion counts.
pub fn support_scores(truth: &SymMat, x: &SymMat, threshold: f64) -> Result<SupportScores> {
    check_dims(truth, x)?;
    if threshold.is_nan() || threshold < 0.0 {
        return Err(Error::Validation(format!(
            "threshold must be nonnegative, got {threshold}"
        )));
    }
    let (mut tp, mut tn, mut fp, mut fn_) = (0, 0, 0, 0);
    for (i, j, t) in truth.upper_entries() {
        if i == j {
            continue;
        }
        match (t != 0.0, x.get(i, j).abs() >= threshold) {
            (true, true) => tp += 1,
            (true, false) => fn_ += 1,
            (false, true) => fp += 1,
            (false, false) => tn += 1,
        }
    }
    Ok(SupportScores {
        tp,
        tn,
        fp,
        fn_,
        sensitivity: rate(tp, fn_),
        specificity: rate(tn, fp),
        nnz: nnz(x, threshold),
        threshold,
    })
}

fn rate(hit: usize, miss: usize) -> f64 {
    if hit + miss == 0 {
        1.0
    } else {
        hit as f64 / (hit + miss) as f64
    }
}

/// Number of entries of `x` (full matrix) with `|x_ij| >= threshold`.
pub fn nnz(x: &SymMat, threshold: f64) -> usize {
    x.as_slice().iter().filter(|v| v.abs() >= threshold).count()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveryReport {
    pub loss_e: f64,
    pub loss_q: f64,
    pub scores: SupportScores,
}

/// All metrics of `x` against the true precision matrix, with
/// `Sigma = truth^{-1}`.
pub fn evaluate(truth: &SymMat, x: &SymMat, threshold: f64) -> Result<RecoveryReport> {
    check_dims(truth, x)?;
    let sigma = inverse_from_factor(&cholesky(truth)?);
    Ok(RecoveryReport {
        loss_e: entropy_loss(&sigma, x)?,
        loss_q: quadratic_loss(&sigma, x)?,
        scores: support_scores(truth, x, threshold)?,
    })
}

fn check_dims(a: &SymMat, b: &SymMat) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}
