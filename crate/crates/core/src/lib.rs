//! Dual spectral projected gradient (DSPG) solver for sparse inverse
//! covariance estimation posed as an l1-penalized log-determinant program
//! with linear equality constraints.
//!
//! The crate is organized bottom-up:
//!
//! - [`linalg`]: dense symmetric matrices, Cholesky kernels, norms.
//! - [`model`]: problem data, dual iterates, objectives and KKT diagnostics.
//! - [`solver`]: the projected gradient iteration itself.
//! - [`generators`]: seeded synthetic instances.
//! - [`metrics`]: recovery quality of an estimated precision matrix.
//! - [`io`]: the on-disk matrix, manifest and report formats.

pub mod error;
pub mod generators;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod model;
pub mod rng;
pub mod solver;

pub use error::{Error, Infeasibility, Result};
pub use linalg::{CholeskyFactor, SymMat};
pub use model::{ConstraintMap, DualIterate, KktResiduals, ProblemInstance, SparseSym};
pub use solver::{solve, IterationRecord, SolveReport, SolveStatus, SolverConfig};
