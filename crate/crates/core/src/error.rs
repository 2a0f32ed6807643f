use std::path::PathBuf;

use thiserror::Error;

/// Why a dual point `(y, W)` cannot be used as an iterate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Infeasibility {
    /// `|W_ij|` exceeds `rho_ij` (1-based indices).
    #[error("box constraint violated at ({i}, {j}): |W_ij| = {value} > rho_ij = {bound}")]
    BoxViolated {
        i: usize,
        j: usize,
        value: f64,
        bound: f64,
    },
    /// `C + W - A^T(y)` failed to factor (1-based pivot).
    #[error("C + W - A^T(y) is not positive definite (pivot {pivot})")]
    NotPositiveDefinite { pivot: usize },
}

#[derive(Debug, Error)]
pub enum Error {
    /// Cholesky met a non-positive pivot. The index is 1-based.
    #[error("matrix is not positive definite (non-positive pivot at {pivot})")]
    NotPositiveDefinite { pivot: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value at ({i}, {j})")]
    NonFinite { i: usize, j: usize },

    #[error("matrix is not symmetric at ({i}, {j})")]
    NotSymmetric { i: usize, j: usize },

    #[error("infeasible dual point: {0}")]
    Infeasible(#[from] Infeasibility),

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
