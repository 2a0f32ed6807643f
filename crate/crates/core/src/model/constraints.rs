use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{cholesky, SymMat};

/// A sparse symmetric coefficient matrix stored as upper-triangle entries.
///
/// Indices are 0-based with `i <= j`. An off-diagonal entry `(i, j, v)`
/// stands for both `A_ij` and `A_ji`, so it contributes `2 v X_ij` to
/// `Tr(A X)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSym {
    entries: Vec<(usize, usize, f64)>,
}

impl SparseSym {
    pub fn new(n: usize, entries: Vec<(usize, usize, f64)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::with_capacity(entries.len());
        for &(i, j, v) in &entries {
            if i > j || j >= n {
                return Err(Error::Validation(format!(
                    "coefficient entry ({}, {}) is not an upper-triangle index of an {n}x{n} matrix",
                    i + 1,
                    j + 1
                )));
            }
            if !v.is_finite() {
                return Err(Error::NonFinite { i, j });
            }
            if !seen.insert((i, j)) {
                return Err(Error::Validation(format!(
                    "duplicate coefficient entry ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
        Ok(Self { entries })
    }

    /// The single-entry matrix used for the constraint `X_ij = 0`.
    pub fn unit(i: usize, j: usize) -> Self {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        Self {
            entries: vec![(i, j, 1.0)],
        }
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    /// `Tr(A X)`.
    pub fn trace_with(&self, x: &SymMat) -> f64 {
        self.entries
            .iter()
            .map(|&(i, j, v)| {
                if i == j {
                    v * x.get(i, i)
                } else {
                    2.0 * v * x.get(i, j)
                }
            })
            .sum()
    }
}

/// Outcome of the surjectivity test on `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurjectivityCheck {
    NotRequested,
    Verified,
    /// Too many constraints to assemble the Gram matrix.
    Skipped { m: usize },
}

/// Above this many constraints the Gram matrix is not assembled.
pub const GRAM_CHECK_LIMIT: usize = 20_000;

/// The linear map `A(X) = (Tr(A_1 X), ..., Tr(A_m X))` together with `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintMap {
    n: usize,
    coeffs: Vec<SparseSym>,
    b: Vec<f64>,
}

impl ConstraintMap {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            coeffs: Vec::new(),
            b: Vec::new(),
        }
    }

    pub fn new(n: usize, coeffs: Vec<SparseSym>, b: Vec<f64>) -> Result<Self> {
        if coeffs.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: coeffs.len(),
                found: b.len(),
            });
        }
        if let Some(p) = b.iter().position(|v| !v.is_finite()) {
            return Err(Error::Validation(format!("b[{}] is not finite", p + 1)));
        }
        for a in &coeffs {
            if let Some(&(i, j, _)) = a.entries.iter().find(|e| e.1 >= n) {
                return Err(Error::Validation(format!(
                    "coefficient entry ({}, {}) out of range for n = {n}",
                    i + 1,
                    j + 1
                )));
            }
        }
        Ok(Self { n, coeffs, b })
    }

    /// One unit constraint `X_ij = 0` per pair (0-based, any order).
    pub fn zero_pattern(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let coeffs = pairs
            .iter()
            .map(|&(i, j)| SparseSym::new(n, vec![(i.min(j), i.max(j), 1.0)]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, coeffs, vec![0.0; pairs.len()])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of constraints `m`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[SparseSym] {
        &self.coeffs
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// `A(X)`.
    pub fn apply(&self, x: &SymMat) -> Vec<f64> {
        debug_assert_eq!(x.dim(), self.n);
        self.coeffs.iter().map(|a| a.trace_with(x)).collect()
    }

    /// `A^T(y) = sum_p y_p A_p`.
    pub fn apply_adjoint(&self, y: &[f64]) -> SymMat {
        assert_eq!(y.len(), self.len(), "adjoint argument has wrong length");
        let mut out = SymMat::zeros(self.n);
        for (a, &yp) in self.coeffs.iter().zip(y) {
            if yp == 0.0 {
                continue;
            }
            for &(i, j, v) in &a.entries {
                out.add_to(i, j, yp * v);
            }
        }
        out
    }

    /// Checks that the Gram matrix `G_pq = A_p . A_q` is positive definite,
    /// i.e. that `A` is surjective.
    ///
    /// Constraints that share no entry are orthogonal, so `G` is factored one
    /// connected block at a time.
    pub fn check_surjective(&self) -> Result<SurjectivityCheck> {
        let m = self.len();
        if m > GRAM_CHECK_LIMIT {
            return Ok(SurjectivityCheck::Skipped { m });
        }
        let mut by_entry: HashMap<(usize, usize), Vec<(usize, f64)>> = HashMap::new();
        for (p, a) in self.coeffs.iter().enumerate() {
            for &(i, j, v) in &a.entries {
                by_entry.entry((i, j)).or_default().push((p, v));
            }
        }
        let mut uf = UnionFind::new(m);
        for users in by_entry.values() {
            for w in users.windows(2) {
                uf.union(w[0].0, w[1].0);
            }
        }
        let mut blocks: HashMap<usize, Vec<usize>> = HashMap::new();
        for p in 0..m {
            blocks.entry(uf.find(p)).or_default().push(p);
        }
        let mut local = vec![0usize; m];
        let mut gram: HashMap<usize, SymMat> = HashMap::new();
        for (&root, members) in &blocks {
            for (k, &p) in members.iter().enumerate() {
                local[p] = k;
            }
            gram.insert(root, SymMat::zeros(members.len()));
        }
        for (&(i, j), users) in &by_entry {
            let weight = if i == j { 1.0 } else { 2.0 };
            let g = gram.get_mut(&uf.find(users[0].0)).expect("block exists");
            for (a, &(p, vp)) in users.iter().enumerate() {
                for &(q, vq) in &users[a..] {
                    g.add_to(local[p], local[q], weight * vp * vq);
                }
            }
        }
        for (root, g) in &gram {
            if cholesky(g).is_err() {
                return Err(Error::Validation(format!(
                    "constraint map is not surjective: Gram matrix of the block containing constraint {} is singular",
                    blocks[root][0] + 1
                )));
            }
        }
        Ok(SurjectivityCheck::Verified)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
