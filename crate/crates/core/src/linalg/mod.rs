//! Dense symmetric linear algebra: storage, Cholesky-based kernels and norms.
//!
//! Factorizations and eigenvalue decompositions are delegated to `faer`,
//! always run sequentially so results do not depend on thread count.

mod cholesky;
pub mod norms;
mod symmat;

pub use cholesky::{
    cholesky, inverse_from_factor, logdet_from_factor, matmul, min_eig_congruence,
    symmetric_eigenvalues, CholeskyFactor,
};
pub use symmat::SymMat;
