//! Problem data for the penalized log-determinant program and its dual.
//!
//! Primal:  minimize `Tr(C X) - mu log det X + sum_ij rho_ij |X_ij|`
//!          subject to `A(X) = b`, `X` positive definite.
//!
//! Dual:    maximize `g(y, W) = b^T y + mu log det(C + W - A^T(y)) + n mu - n mu log mu`
//!          subject to `|W_ij| <= rho_ij` and `C + W - A^T(y)` positive definite.

mod constraints;
mod iterate;

pub use constraints::{ConstraintMap, SparseSym, SurjectivityCheck, GRAM_CHECK_LIMIT};
pub use iterate::{
    dual_gradient, dual_objective, kkt_residuals, make_iterate, primal_objective,
    recover_primal, DualIterate, KktResiduals, BOX_TOLERANCE,
};
pub(crate) use iterate::gradient_y;

use crate::error::{Error, Result};
use crate::linalg::SymMat;

/// A validated problem instance. Immutable once built.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    c: SymMat,
    rho: SymMat,
    mu: f64,
    map: ConstraintMap,
    zero_pattern: Option<Vec<(usize, usize)>>,
    surjectivity: SurjectivityCheck,
}

impl ProblemInstance {
    pub fn builder(c: SymMat) -> InstanceBuilder {
        InstanceBuilder {
            c,
            rho: None,
            mu: 1.0,
            map: None,
            zero_pattern: None,
            check_surjectivity: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    pub fn c(&self) -> &SymMat {
        &self.c
    }

    pub fn rho(&self) -> &SymMat {
        &self.rho
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn map(&self) -> &ConstraintMap {
        &self.map
    }

    /// Zero-pattern pairs `(i, j)`, 0-based with `i < j`, used for cleanup.
    pub fn zero_pattern(&self) -> Option<&[(usize, usize)]> {
        self.zero_pattern.as_deref()
    }

    pub fn surjectivity(&self) -> SurjectivityCheck {
        self.surjectivity
    }

    /// Same instance with a different penalty matrix.
    pub fn with_rho(&self, rho: SymMat) -> Result<Self> {
        validate_rho(&rho, self.dim())?;
        Ok(Self {
            rho,
            ..self.clone()
        })
    }
}

fn validate_rho(rho: &SymMat, n: usize) -> Result<()> {
    if rho.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rho.dim(),
        });
    }
    if let Some((i, j, v)) = rho.upper_entries().find(|e| e.2 < 0.0) {
        return Err(Error::Validation(format!(
            "rho must be nonnegative, rho({}, {}) = {v}",
            i + 1,
            j + 1
        )));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct InstanceBuilder {
    c: SymMat,
    rho: Option<SymMat>,
    mu: f64,
    map: Option<ConstraintMap>,
    zero_pattern: Option<Vec<(usize, usize)>>,
    check_surjectivity: bool,
}

impl InstanceBuilder {
    pub fn rho(mut self, rho: SymMat) -> Self {
        self.rho = Some(rho);
        self
    }

    /// `rho * E`, penalizing every entry including the diagonal.
    pub fn uniform_rho(self, rho: f64) -> Result<Self> {
        let n = self.c.dim();
        Ok(self.rho(SymMat::filled(n, rho)?))
    }

    pub fn mu(mut self, mu: f64) -> Self {
        self.mu = mu;
        self
    }

    pub fn constraints(mut self, map: ConstraintMap) -> Self {
        self.map = Some(map);
        self.zero_pattern = None;
        self
    }

    /// Constraints `X_ij = 0` for each pair, also remembered for cleanup.
    pub fn zero_pattern(mut self, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let pairs: Vec<_> = pairs.into_iter().map(|(i, j)| (i.min(j), i.max(j))).collect();
        if let Some(&(i, _)) = pairs.iter().find(|(i, j)| i == j) {
            return Err(Error::Validation(format!(
                "zero pattern may not contain the diagonal entry ({0}, {0})",
                i + 1
            )));
        }
        self.map = Some(ConstraintMap::zero_pattern(self.c.dim(), &pairs)?);
        self.zero_pattern = Some(pairs);
        Ok(self)
    }

    pub fn check_surjectivity(mut self, on: bool) -> Self {
        self.check_surjectivity = on;
        self
    }

    pub fn build(self) -> Result<ProblemInstance> {
        let n = self.c.dim();
        if n == 0 {
            return Err(Error::Validation("dimension n must be positive".into()));
        }
        if !(self.mu.is_finite() && self.mu > 0.0) {
            return Err(Error::Validation(format!("mu must be positive, got {}", self.mu)));
        }
        let rho = self.rho.unwrap_or_else(|| SymMat::zeros(n));
        validate_rho(&rho, n)?;
        let map = self.map.unwrap_or_else(|| ConstraintMap::empty(n));
        if map.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: map.dim(),
            });
        }
        let surjectivity = if self.check_surjectivity && !map.is_empty() {
            map.check_surjective()?
        } else {
            SurjectivityCheck::NotRequested
        };
        Ok(ProblemInstance {
            c: self.c,
            rho,
            mu: self.mu,
            map,
            zero_pattern: self.zero_pattern,
            surjectivity,
        })
    }
}
