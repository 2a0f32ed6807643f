#![allow(dead_code)]

use dspg_core::rng::Stream;
use dspg_core::SymMat;
use nalgebra::DMatrix;

/// Symmetric matrix with entries uniform on `[-1, 1)`.
pub fn random_sym(n: usize, seed: u64) -> SymMat {
    let mut s = Stream::new(seed, 99);
    SymMat::from_upper_fn(n, |_, _| s.uniform_in(-1.0, 1.0)).unwrap()
}

/// Well-conditioned SPD matrix `B^T B / n + shift I`.
pub fn random_spd(n: usize, seed: u64, shift: f64) -> SymMat {
    let mut s = Stream::new(seed, 98);
    let b = DMatrix::from_fn(n, n, |_, _| s.uniform_in(-1.0, 1.0));
    let m = b.transpose() * &b / n as f64 + DMatrix::identity(n, n) * shift;
    from_na(&m)
}

pub fn to_na(m: &SymMat) -> DMatrix<f64> {
    let n = m.dim();
    DMatrix::from_fn(n, n, |i, j| m.get(i, j))
}

pub fn from_na(m: &DMatrix<f64>) -> SymMat {
    let n = m.nrows();
    let data: Vec<f64> = (0..n * n).map(|k| m[(k / n, k % n)]).collect();
    SymMat::symmetrize_from(n, &data).unwrap()
}

pub fn na_eigenvalues(m: &SymMat) -> Vec<f64> {
    let mut ev: Vec<f64> = to_na(m).symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, v| a.max(v.abs()))
}
