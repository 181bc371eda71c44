//! Dense square matrices and the graph/spectral analyses built on them.

mod graph;
mod linsolve;
mod spectral;

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use graph::{
    is_acyclic, scc_condensation, weakly_chained_check, BlockKind, ChainWitness, Condensation,
    Orientation,
};
pub use linsolve::{linear_solve, PIVOT_REL_TOL};
pub use spectral::{contraction_modulus, perron_vector, spectral_radius, Side};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatrixError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix must have at least one row")]
    Empty,
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("entry ({row}, {col}) is negative")]
    NonNegativityViolated { row: usize, col: usize },
    #[error("no convergence after {0} steps")]
    NoConvergence(usize),
    #[error("vertex {0} has sum above one")]
    NotSubstochastic(usize),
    #[error("vertices {0:?} reach no deficient vertex")]
    NoChain(Vec<usize>),
    #[error("matrix is not irreducible")]
    NotIrreducible,
    #[error("cannot remove every vertex")]
    RemoveAll,
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("singular matrix (pivot {pivot})")]
    Singular { pivot: usize },
}

/// Dense square real matrix, row-major. Entry `(i, j)` is `w_ij`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    /// Builds a matrix from rows, rejecting ragged or non-finite input.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, MatrixError> {
        let n = rows.len();
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(MatrixError::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(MatrixError::NonFinite { row: i, col: j });
                }
                data.push(v);
            }
        }
        Ok(Matrix { n, data })
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Entrywise absolute value `|W|`.
    pub fn abs(&self) -> Self {
        self.map(f64::abs)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|v| v * s)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn add(&self, other: &Matrix) -> Self {
        assert_eq!(self.n, other.n);
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Self {
        assert_eq!(self.n, other.n);
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// `self · diag(d)`: column `j` scaled by `d[j]`.
    pub fn scale_columns(&self, d: &[f64]) -> Self {
        assert_eq!(self.n, d.len());
        Self::from_fn(self.n, |i, j| self[(i, j)] * d[j])
    }

    /// `diag(d) · self`: row `i` scaled by `d[i]`.
    pub fn scale_rows(&self, d: &[f64]) -> Self {
        assert_eq!(self.n, d.len());
        Self::from_fn(self.n, |i, j| self[(i, j)] * d[i])
    }

    /// Row vector times matrix, `xM`.
    pub fn vec_mul(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.n, x.len());
        let mut out = vec![0.0; self.n];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (o, &w) in out.iter_mut().zip(self.row(i)) {
                *o += xi * w;
            }
        }
        out
    }

    /// Matrix times column vector, `Mv`.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.n, v.len());
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for i in 0..self.n {
            for (o, &v) in out.iter_mut().zip(self.row(i)) {
                *o += v;
            }
        }
        out
    }

    /// Induced infinity norm (max absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&v| v >= 0.0)
    }

    pub(crate) fn check_nonnegative(&self) -> Result<(), MatrixError> {
        match self.data.iter().position(|&v| v < 0.0) {
            Some(k) => Err(MatrixError::NonNegativityViolated {
                row: k / self.n,
                col: k % self.n,
            }),
            None => Ok(()),
        }
    }

    /// Edge `i → j` exists iff `w_ij != 0` exactly.
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self[(i, j)] != 0.0
    }

    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i)
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(|(j, _)| j)
    }

    /// Submatrix on `keep`, in the given order.
    pub fn submatrix(&self, keep: &[usize]) -> Self {
        Self::from_fn(keep.len(), |a, b| self[(keep[a], keep[b])])
    }

    /// Whether every row sums to one within `tol` (and `W >= 0`).
    pub fn is_row_stochastic(&self, tol: f64) -> bool {
        self.is_nonnegative() && self.row_sums().iter().all(|s| (s - 1.0).abs() <= tol)
    }

    pub fn is_col_stochastic(&self, tol: f64) -> bool {
        self.is_nonnegative() && self.col_sums().iter().all(|s| (s - 1.0).abs() <= tol)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.n).map(|i| self.row(i)))
            .finish()
    }
}

impl TryFrom<Vec<Vec<f64>>> for Matrix {
    type Error = MatrixError;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self, Self::Error> {
        Matrix::from_rows(&rows)
    }
}

impl From<Matrix> for Vec<Vec<f64>> {
    fn from(m: Matrix) -> Self {
        m.to_rows()
    }
}

/// Submatrix with the vertices in `remove` deleted, original order kept.
pub fn principal_submatrix(a: &Matrix, remove: &[usize]) -> Result<Matrix, MatrixError> {
    let n = a.n();
    if let Some(&v) = remove.iter().find(|&&v| v >= n) {
        return Err(MatrixError::VertexOutOfRange(v));
    }
    let keep: Vec<usize> = (0..n).filter(|i| !remove.contains(i)).collect();
    if keep.is_empty() {
        return Err(MatrixError::RemoveAll);
    }
    Ok(a.submatrix(&keep))
}

pub fn norm_inf_vec(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}
