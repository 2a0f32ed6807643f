//! Norms and inner products on `S^n` and on the product space `R^m x S^n`.

use super::SymMat;

/// Frobenius norm `sqrt(M . M)`.
pub fn fro(m: &SymMat) -> f64 {
    m.dot(m).sqrt()
}

/// Largest absolute entry.
pub fn inf_elem(m: &SymMat) -> f64 {
    m.as_slice().iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

pub fn vec2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn vec_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// `max(|y|_inf, |W|_inf)`; zero for an empty `y` and a zero `W`.
pub fn pair_inf(y: &[f64], w: &SymMat) -> f64 {
    vec_inf(y).max(inf_elem(w))
}

/// `(y1, W1) . (y2, W2) = y1^T y2 + W1 . W2`.
pub fn pair_dot(y1: &[f64], w1: &SymMat, y2: &[f64], w2: &SymMat) -> f64 {
    assert_eq!(y1.len(), y2.len());
    y1.iter().zip(y2).map(|(a, b)| a * b).sum::<f64>() + w1.dot(w2)
}

/// Norm induced by [`pair_dot`].
pub fn pair_norm(y: &[f64], w: &SymMat) -> f64 {
    pair_dot(y, w, y, w).sqrt()
}
