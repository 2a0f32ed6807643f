use faer::linalg::solvers::{DenseSolveCore, Llt, LltError};
use faer::linalg::triangular_solve::solve_lower_triangular_in_place;
use faer::{Mat, Par, Side};

use super::SymMat;
use crate::error::{Error, Result};

/// Lower-triangular Cholesky factor `L` with `L * L^T = M`.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    llt: Llt<f64>,
}

/// Factors `m` with a zero pivot tolerance: any pivot that is not strictly
/// positive is reported as [`Error::NotPositiveDefinite`] with its 1-based
/// index. This is the only positive-definiteness test in the crate.
pub fn cholesky(m: &SymMat) -> Result<CholeskyFactor> {
    match m.to_faer().llt(Side::Lower) {
        Ok(llt) => Ok(CholeskyFactor { llt }),
        Err(LltError::NonPositivePivot { index }) => {
            Err(Error::NotPositiveDefinite { pivot: index + 1 })
        }
    }
}

impl CholeskyFactor {
    pub fn dim(&self) -> usize {
        self.llt.L().nrows()
    }

    /// Entry `L[i, j]` (zero above the diagonal).
    pub fn l(&self, i: usize, j: usize) -> f64 {
        self.llt.L()[(i, j)]
    }

    /// `L * v`.
    pub fn lower_mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let l = self.llt.L();
        let n = l.nrows();
        assert_eq!(v.len(), n);
        (0..n)
            .map(|i| (0..=i).map(|j| l[(i, j)] * v[j]).sum())
            .collect()
    }

    /// `L^T * M * L`, symmetrized. Shares its spectrum with `M * (L L^T)`.
    pub fn outer_congruence(&self, m: &SymMat) -> SymMat {
        let l = self.llt.L();
        let prod = l.transpose() * m.to_faer() * l;
        SymMat::from_faer_symmetrized(&prod)
    }

    /// `(1/N) sum_t (L z_t)(L z_t)^T` for the `N` vectors stored row-wise in
    /// `z` (length `N * n`), symmetrized.
    pub fn mean_outer_of_images(&self, z: &[f64]) -> SymMat {
        let n = self.dim();
        assert!(n > 0 && z.len().is_multiple_of(n), "sample buffer is not a multiple of n");
        let count = z.len() / n;
        let zt = Mat::from_fn(count, n, |t, i| z[t * n + i]);
        let images = zt * self.llt.L().transpose();
        let scatter = images.transpose() * &images * (1.0 / count as f64);
        SymMat::from_faer_symmetrized(&scatter)
    }

    pub(crate) fn lower(&self) -> faer::MatRef<'_, f64> {
        self.llt.L()
    }
}

/// `log det M = 2 * sum(log L_ii)`.
pub fn logdet_from_factor(f: &CholeskyFactor) -> f64 {
    let l = f.lower();
    2.0 * (0..l.nrows()).map(|i| l[(i, i)].ln()).sum::<f64>()
}

/// `M^{-1}` from its factor, with the two triangles averaged afterwards.
pub fn inverse_from_factor(f: &CholeskyFactor) -> SymMat {
    SymMat::from_faer_symmetrized(&f.llt.inverse())
}

/// Smallest eigenvalue of `L^{-1} M L^{-T}`.
///
/// Forms the congruence with two triangular solves, symmetrizes it and runs
/// a dense symmetric eigenvalue decomposition.
pub fn min_eig_congruence(f: &CholeskyFactor, m: &SymMat) -> f64 {
    assert_eq!(f.dim(), m.dim(), "factor and matrix dimensions differ");
    if m.dim() == 0 {
        return f64::INFINITY;
    }
    let l = f.lower();
    // L^{-1} M
    let mut half = m.to_faer();
    solve_lower_triangular_in_place(l, half.as_mut(), Par::Seq);
    // L^{-1} (L^{-1} M)^T = L^{-1} M L^{-T}
    let mut full: Mat<f64> = half.transpose().to_owned();
    solve_lower_triangular_in_place(l, full.as_mut(), Par::Seq);
    let s = SymMat::from_faer_symmetrized(&full);
    symmetric_eigenvalues(&s)[0]
}

/// All eigenvalues of `m`, ascending.
///
/// # Panics
/// If the tridiagonal QR iteration fails to converge, which does not happen
/// for finite input in practice.
pub fn symmetric_eigenvalues(m: &SymMat) -> Vec<f64> {
    if m.dim() == 0 {
        return Vec::new();
    }
    let mut ev = m
        .to_faer()
        .self_adjoint_eigenvalues(Side::Lower)
        .expect("symmetric eigenvalue iteration did not converge");
    ev.sort_by(f64::total_cmp);
    ev
}

/// General product `a * b` as a row-major buffer (not symmetric in general).
pub fn matmul(a: &SymMat, b: &SymMat) -> Vec<f64> {
    let n = a.dim();
    assert_eq!(n, b.dim());
    let p = a.to_faer() * b.to_faer();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(p[(i, j)]);
        }
    }
    out
}
