//! Synthetic test instances: sparse precision matrices, Gaussian sample
//! covariances and zero-pattern constraint sets.
//!
//! Every output is a pure function of its inputs; randomness comes from the
//! streams in [`crate::rng`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{cholesky, inverse_from_factor, symmetric_eigenvalues, SymMat};
use crate::model::ConstraintMap;
use crate::rng::{streams, Stream};

/// Diagonal shift added beyond `|lambda_min|` when a candidate is not PD.
pub const PD_MARGIN: f64 = 0.1;

/// Candidates whose smallest eigenvalue does not exceed this are treated as
/// singular. Exactly singular families (even cyclic bands) come out of the
/// eigensolver as `+-1e-16`, which the sign alone cannot classify.
pub const PD_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Uniformly placed off-diagonal nonzeros with values in `[-1, 1]`.
    Random,
    /// Band of half-width `k`, `A_{i,i+-j} = 0.5 / j`.
    Ar(usize),
    /// `A_ij = exp(-2 |i - j|)`.
    Decay,
    /// Unit diagonal, first row and column `0.1`.
    Star,
    /// `Ar(1)` with the corner entries `A_1n = A_n1 = 0.5`.
    Circle,
    /// Unit diagonal, `0.5` everywhere else.
    Full,
}

impl Family {
    /// Structured families are this crate's own definitions rather than
    /// reproductions of a published draw.
    pub fn is_repo_variant(self) -> bool {
        !matches!(self, Family::Random)
    }

    pub fn structure(self) -> &'static str {
        match self {
            Family::Random => "uniform random pattern",
            Family::Ar(1) => "tridiagonal",
            Family::Ar(_) => "banded",
            Family::Decay => "dense, exponentially decaying off the diagonal",
            Family::Star => "star (hub at index 1)",
            Family::Circle => "cyclic tridiagonal",
            Family::Full => "dense",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Random => f.write_str("random"),
            Family::Ar(k) => write!(f, "ar{k}"),
            Family::Decay => f.write_str("decay"),
            Family::Star => f.write_str("star"),
            Family::Circle => f.write_str("circle"),
            Family::Full => f.write_str("full"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "random" => Family::Random,
            "decay" => Family::Decay,
            "star" => Family::Star,
            "circle" => Family::Circle,
            "full" => Family::Full,
            _ => match s.strip_prefix("ar").and_then(|k| k.parse::<usize>().ok()) {
                Some(k) if k >= 1 => Family::Ar(k),
                _ => return Err(Error::Validation(format!("unknown family '{s}'"))),
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub n: usize,
    /// Fraction of off-diagonal pairs that are nonzero (`Random` only).
    pub density: f64,
    pub seed: u64,
    pub family: Family,
    /// Sample count for the covariance draw; `None` means `2n`.
    pub samples: Option<usize>,
}

impl GenSpec {
    pub fn new(family: Family, n: usize) -> Self {
        Self {
            n,
            density: 0.0,
            seed: 0,
            family,
            samples: None,
        }
    }

    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(2 * self.n)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Validation("n must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err(Error::Validation(format!(
                "density must lie in [0, 1], got {}",
                self.density
            )));
        }
        if let Family::Ar(k) = self.family {
            if k == 0 || k >= self.n {
                return Err(Error::Validation(format!(
                    "ar{k} needs 1 <= k < n = {}",
                    self.n
                )));
            }
        }
        if self.samples == Some(0) {
            return Err(Error::Validation("samples must be at least 1".into()));
        }
        Ok(())
    }
}

/// Number of off-diagonal pairs selected by the `Random` family.
pub fn random_pair_count(n: usize, density: f64) -> usize {
    let total = n * n.saturating_sub(1) / 2;
    ((density * total as f64).ceil() as usize).min(total)
}

/// The `k`-th upper off-diagonal pair in row-major order.
fn pair_at(n: usize, mut k: usize) -> (usize, usize) {
    for i in 0..n {
        let row = n - i - 1;
        if k < row {
            return (i, i + 1 + k);
        }
        k -= row;
    }
    unreachable!("pair index out of range")
}

/// Candidate matrix before the positive-definiteness shift.
pub fn raw_pattern(spec: &GenSpec) -> Result<SymMat> {
    spec.validate()?;
    let n = spec.n;
    let m = match spec.family {
        Family::Random => {
            let total = n * (n - 1) / 2;
            let count = random_pair_count(n, spec.density);
            let picks = Stream::new(spec.seed, streams::PATTERN).sample_indices(total, count);
            let mut values = Stream::new(spec.seed, streams::VALUES);
            let mut m = SymMat::identity(n);
            for p in picks {
                let (i, j) = pair_at(n, p);
                m.set(i, j, values.uniform_in(-1.0, 1.0));
            }
            m
        }
        Family::Ar(k) => band(n, k)?,
        Family::Decay => SymMat::from_upper_fn(n, |i, j| (-2.0 * (j - i) as f64).exp())?,
        Family::Star => SymMat::from_upper_fn(n, |i, j| match (i, j) {
            _ if i == j => 1.0,
            (0, _) => 0.1,
            _ => 0.0,
        })?,
        Family::Circle => {
            let mut m = band(n, 1)?;
            if n > 2 {
                m.set(0, n - 1, 0.5);
            }
            m
        }
        Family::Full => SymMat::from_upper_fn(n, |i, j| if i == j { 1.0 } else { 0.5 })?,
    };
    Ok(m)
}

fn band(n: usize, k: usize) -> Result<SymMat> {
    SymMat::from_upper_fn(n, |i, j| match j - i {
        0 => 1.0,
        d if d <= k => 0.5 / d as f64,
        _ => 0.0,
    })
}

/// Sparse positive definite precision matrix `Sigma^{-1}`.
///
/// The candidate from [`raw_pattern`] gets its diagonal raised by
/// `|lambda_min| + 0.1` when `lambda_min <= PD_FLOOR`; the off-diagonal pattern is
/// never altered.
pub fn gen_precision(spec: &GenSpec) -> Result<SymMat> {
    let mut m = raw_pattern(spec)?;
    let lmin = symmetric_eigenvalues(&m)[0];
    if lmin <= PD_FLOOR {
        let shift = lmin.abs() + PD_MARGIN;
        for i in 0..spec.n {
            m.add_to(i, i, shift);
        }
    }
    cholesky(&m).expect("shifted precision matrix is positive definite");
    Ok(m)
}

/// Sample covariance `C = (1/N) sum_t x_t x_t^T` of `N` draws
/// `x_t = L z_t ~ N(0, Sigma)`, with `L L^T = Sigma = precision^{-1}` and
/// `z_t` standard normal. Draws are consumed sample by sample.
pub fn sample_covariance(precision: &SymMat, samples: usize, seed: u64) -> Result<SymMat> {
    if samples == 0 {
        return Err(Error::Validation("samples must be at least 1".into()));
    }
    let sigma = inverse_from_factor(&cholesky(precision)?);
    let factor = cholesky(&sigma)?;
    let mut gauss = Stream::new(seed, streams::GAUSSIAN);
    let z: Vec<f64> = (0..samples * precision.dim()).map(|_| gauss.normal()).collect();
    Ok(factor.mean_outer_of_images(&z))
}

/// Off-diagonal zero positions `(i, j)`, `i < j`, in row-major order.
pub fn zero_positions(precision: &SymMat) -> Vec<(usize, usize)> {
    precision
        .upper_entries()
        .filter(|&(i, j, v)| i < j && v == 0.0)
        .map(|(i, j, _)| (i, j))
        .collect()
}

/// Constraints `X_ij = 0` on a seeded subsample of `ceil(fraction * |zeros|)`
/// zero positions of `precision`. The selected pairs are returned sorted.
pub fn build_zero_constraints(
    precision: &SymMat,
    fraction: f64,
    seed: u64,
) -> Result<(ConstraintMap, Vec<(usize, usize)>)> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::Validation(format!(
            "constraint fraction must lie in [0, 1], got {fraction}"
        )));
    }
    let zeros = zero_positions(precision);
    let count = ((fraction * zeros.len() as f64).ceil() as usize).min(zeros.len());
    let pattern = if count == zeros.len() {
        zeros
    } else {
        let mut picks =
            Stream::new(seed, streams::CONSTRAINTS).sample_indices(zeros.len(), count);
        picks.sort_unstable();
        picks.into_iter().map(|p| zeros[p]).collect()
    };
    let map = ConstraintMap::zero_pattern(precision.dim(), &pattern)?;
    Ok((map, pattern))
}

/// Half-bandwidth of the off-diagonal pattern (largest `j - i` with a
/// nonzero), 0 for a diagonal matrix.
pub fn bandwidth(m: &SymMat) -> usize {
    m.upper_entries()
        .filter(|&(_, _, v)| v != 0.0)
        .map(|(i, j, _)| j - i)
        .max()
        .unwrap_or(0)
}
