use std::fmt;

use faer::Mat;

use crate::error::{Error, Result};

/// Dense symmetric matrix with both triangles stored.
///
/// Every constructor rejects non-finite entries, and every mutator writes the
/// `(i, j)` and `(j, i)` slots together, so `get(i, j) == get(j, i)` holds
/// bit-for-bit at all times.
#[derive(Clone, PartialEq)]
pub struct SymMat {
    n: usize,
    data: Vec<f64>,
}

impl SymMat {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// `value * E`, where `E` is the all-ones matrix.
    pub fn filled(n: usize, value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::NonFinite { i: 0, j: 0 });
        }
        Ok(Self {
            n,
            data: vec![value; n * n],
        })
    }

    pub fn from_diag(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            if !d.is_finite() {
                return Err(Error::NonFinite { i, j: i });
            }
            m.data[i * n + i] = d;
        }
        Ok(m)
    }

    /// Builds from the upper triangle: `f(i, j)` is called once for each `i <= j`.
    pub fn from_upper_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                if !v.is_finite() {
                    return Err(Error::NonFinite { i, j });
                }
                m.data[i * n + j] = v;
                m.data[j * n + i] = v;
            }
        }
        Ok(m)
    }

    /// Builds from full rows; the input must already be exactly symmetric.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: r.len(),
                });
            }
            for (j, v) in r.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite { i, j });
                }
            }
        }
        for (i, row) in rows.iter().enumerate() {
            for j in i + 1..n {
                if row[j] != rows[j][i] {
                    return Err(Error::NotSymmetric { i, j });
                }
            }
        }
        Ok(Self {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    /// Averages the `(i, j)` and `(j, i)` slots of a square row-major buffer.
    pub fn symmetrize_from(n: usize, data: &[f64]) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        Self::from_upper_fn(n, |i, j| {
            if i == j {
                data[i * n + i]
            } else {
                0.5 * (data[i * n + j] + data[j * n + i])
            }
        })
    }

    pub(crate) fn from_faer_symmetrized(m: &Mat<f64>) -> Self {
        let n = m.nrows();
        let mut out = Self::zeros(n);
        for j in 0..n {
            for i in j..n {
                let v = if i == j {
                    m[(i, i)]
                } else {
                    0.5 * (m[(i, j)] + m[(j, i)])
                };
                out.data[i * n + j] = v;
                out.data[j * n + i] = v;
            }
        }
        out
    }

    pub(crate) fn to_faer(&self) -> Mat<f64> {
        let n = self.n;
        Mat::from_fn(n, n, |i, j| self.data[i * n + j])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Writes both `(i, j)` and `(j, i)`.
    ///
    /// # Panics
    /// If `value` is not finite or an index is out of range.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(value.is_finite(), "SymMat entries must be finite");
        let n = self.n;
        self.data[i * n + j] = value;
        self.data[j * n + i] = value;
    }

    /// Adds `delta` to `(i, j)` and, off the diagonal, to `(j, i)`.
    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, delta: f64) {
        let n = self.n;
        self.data[i * n + j] += delta;
        if i != j {
            self.data[j * n + i] += delta;
        }
    }

    /// Row-major view of all `n * n` entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    fn zip_with(&self, other: &SymMat, f: impl Fn(f64, f64) -> f64) -> SymMat {
        assert_eq!(self.n, other.n, "SymMat dimension mismatch");
        SymMat {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &SymMat) -> SymMat {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SymMat) -> SymMat {
        self.zip_with(other, |a, b| a - b)
    }

    /// `self + alpha * other`.
    pub fn axpy(&self, alpha: f64, other: &SymMat) -> SymMat {
        self.zip_with(other, |a, b| a + alpha * b)
    }

    pub fn scale(&self, alpha: f64) -> SymMat {
        SymMat {
            n: self.n,
            data: self.data.iter().map(|&a| alpha * a).collect(),
        }
    }

    /// Element-wise map. The closure sees entries in row-major order and must
    /// not break symmetry (any pure function of the value is fine).
    pub fn map(&self, f: impl Fn(f64) -> f64) -> SymMat {
        SymMat {
            n: self.n,
            data: self.data.iter().map(|&a| f(a)).collect(),
        }
    }

    /// Frobenius inner product `Tr(self * other)`.
    pub fn dot(&self, other: &SymMat) -> f64 {
        assert_eq!(self.n, other.n, "SymMat dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    /// Iterates `(i, j, value)` over the upper triangle, diagonal included.
    pub fn upper_entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| (i..n).map(move |j| (i, j, self.data[i * n + j])))
    }
}

impl fmt::Debug for SymMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SymMat({}x{}) [", self.n, self.n)?;
        for i in 0..self.n {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}
