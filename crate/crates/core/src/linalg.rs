//! Dense complex matrices for fiber metrics and their endomorphisms.
//!
//! Matrices here are small (dimension at most a handful), so everything is
//! stored row-major in a flat `Vec` and factorized by hand.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Relative pivot scale for the positive-definiteness test.
const PIVOT_EPS: f64 = 1e-13;

/// A square complex matrix with no symmetry constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct Endomorphism {
    dim: usize,
    entries: Vec<C64>,
}

impl Endomorphism {
    pub fn zeros(dim: usize) -> Self {
        Endomorphism {
            dim,
            entries: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn scalar(dim: usize, c: C64) -> Self {
        Self::from_fn(dim, |i, j| if i == j { c } else { C64::new(0.0, 0.0) })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Endomorphism { dim, entries }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Ok(Endomorphism { dim, entries })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Endomorphism {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn matmul(&self, other: &Endomorphism) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.dim, v.len(), "apply dimension mismatch");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &Endomorphism) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Endomorphism) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: C64) -> Self {
        Endomorphism {
            dim: self.dim,
            entries: self.entries.iter().map(|&z| z * c).collect(),
        }
    }

    fn zip(&self, other: &Endomorphism, f: impl Fn(C64, C64) -> C64) -> Self {
        assert_eq!(self.dim, other.dim, "elementwise dimension mismatch");
        Endomorphism {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Induced infinity norm (max absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Block-diagonal `diag(self, other)`.
    pub fn block_diag(&self, other: &Endomorphism) -> Self {
        let (a, b) = (self.dim, other.dim);
        Self::from_fn(a + b, |i, j| {
            if i < a && j < a {
                self[(i, j)]
            } else if i >= a && j >= a {
                other[(i - a, j - a)]
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }
}

impl Index<(usize, usize)> for Endomorphism {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for Endomorphism {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i * self.dim + j]
    }
}

/// A complex matrix with `M = M†`, symmetrized on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(Endomorphism);

impl HermitianMatrix {
    /// Builds `(M + M†)/2`.
    pub fn from_endomorphism(m: &Endomorphism) -> Self {
        let sym = Endomorphism::from_fn(m.dim(), |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
        HermitianMatrix(sym)
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        Ok(Self::from_endomorphism(&Endomorphism::from_rows(rows)?))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Ok(Self::from_endomorphism(&Endomorphism::from_real_rows(rows)?))
    }

    pub fn identity(dim: usize) -> Self {
        HermitianMatrix(Endomorphism::identity(dim))
    }

    pub fn zeros(dim: usize) -> Self {
        HermitianMatrix(Endomorphism::zeros(dim))
    }

    pub fn scalar(dim: usize, c: f64) -> Self {
        HermitianMatrix(Endomorphism::scalar(dim, C64::new(c, 0.0)))
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        HermitianMatrix(Endomorphism::from_fn(n, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_endomorphism(&self) -> &Endomorphism {
        &self.0
    }

    pub fn add(&self, other: &HermitianMatrix) -> Self {
        HermitianMatrix(self.0.add(&other.0))
    }

    pub fn sub(&self, other: &HermitianMatrix) -> Self {
        HermitianMatrix(self.0.sub(&other.0))
    }

    pub fn scale(&self, c: f64) -> Self {
        HermitianMatrix(self.0.scale(C64::new(c, 0.0)))
    }

    pub fn block_diag(&self, other: &HermitianMatrix) -> Self {
        HermitianMatrix(self.0.block_diag(&other.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.max_abs()
    }

    /// `Σ_ij M[i][j] u^i conj(v^j)`: the form `h(u, v)` for a metric matrix
    /// stored as `M[i][j] = h(e_i, e_j)`.
    pub fn form(&self, u: &[C64], v: &[C64]) -> C64 {
        let n = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += self.0[(i, j)] * u[i] * v[j].conj();
            }
        }
        acc
    }

    /// `h(v, v)`, real by construction.
    pub fn norm_sqr(&self, v: &[C64]) -> f64 {
        self.form(v, v).re
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = C64;

    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

/// Lower-triangular factor `L` with `M = L L†`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    lower: Endomorphism,
}

impl Cholesky {
    /// Factorizes `m`, failing on the first pivot at or below
    /// `dim · 1e-13 · max|entry|`.
    pub fn factor(m: &HermitianMatrix) -> Result<Self> {
        let a = m.as_endomorphism();
        if !a.is_finite() {
            return Err(Error::NonFinite("hermitian matrix"));
        }
        let n = a.dim();
        let threshold = n as f64 * PIVOT_EPS * a.max_abs();
        let mut l = Endomorphism::zeros(n);
        for j in 0..n {
            let mut d = a[(j, j)].re;
            for k in 0..j {
                d -= l[(j, k)].norm_sqr();
            }
            if !(d > threshold) {
                return Err(Error::NotPositiveDefinite { pivot: j, value: d });
            }
            let ljj = d.sqrt();
            l[(j, j)] = C64::new(ljj, 0.0);
            for i in (j + 1)..n {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / ljj;
            }
        }
        Ok(Cholesky { lower: l })
    }

    pub fn lower(&self) -> &Endomorphism {
        &self.lower
    }

    /// Solves `M x = b` for one right-hand side.
    pub fn solve_vec(&self, b: &[C64]) -> Vec<C64> {
        let l = &self.lower;
        let n = l.dim();
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= l[(i, k)] * y[k];
            }
            y[i] = s / l[(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= l[(k, i)].conj() * y[k];
            }
            y[i] = s / l[(i, i)];
        }
        y
    }

    pub fn solve(&self, b: &Endomorphism) -> Endomorphism {
        let n = b.dim();
        let mut out = Endomorphism::zeros(n);
        for j in 0..n {
            let col: Vec<C64> = (0..n).map(|i| b[(i, j)]).collect();
            let x = self.solve_vec(&col);
            for i in 0..n {
                out[(i, j)] = x[i];
            }
        }
        out
    }

    pub fn inverse(&self) -> HermitianMatrix {
        let n = self.lower.dim();
        HermitianMatrix::from_endomorphism(&self.solve(&Endomorphism::identity(n)))
    }
}

/// Cholesky-pivot test for positive definiteness.
pub fn is_positive_definite(m: &HermitianMatrix) -> Result<bool> {
    match Cholesky::factor(m) {
        Ok(_) => Ok(true),
        Err(Error::NotPositiveDefinite { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// `M + shift·max(1, max|entry|)·I` is positive definite.
pub fn is_positive_semidefinite(m: &HermitianMatrix, shift: f64) -> Result<bool> {
    let scale = m.max_abs().max(1.0);
    let shifted = m.add(&HermitianMatrix::scalar(m.dim(), shift * scale));
    is_positive_definite(&shifted)
}

/// Solves `M X = B` for positive-definite `M`.
pub fn solve(m: &HermitianMatrix, b: &Endomorphism) -> Result<Endomorphism> {
    if m.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: b.dim(),
        });
    }
    if !b.is_finite() {
        return Err(Error::NonFinite("right-hand side"));
    }
    Ok(Cholesky::factor(m)?.solve(b))
}

pub fn inverse(m: &HermitianMatrix) -> Result<HermitianMatrix> {
    Ok(Cholesky::factor(m)?.inverse())
}

/// Pullback `A*M` with `(A*M)(s, t) = M(As, At)`, i.e. `A† M A`.
pub fn pullback_metric(a: &Endomorphism, m: &HermitianMatrix) -> Result<HermitianMatrix> {
    if a.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: a.dim(),
        });
    }
    if !a.is_finite() || !m.as_endomorphism().is_finite() {
        return Err(Error::NonFinite("pullback input"));
    }
    let product = a.adjoint().matmul(m.as_endomorphism()).matmul(a);
    Ok(HermitianMatrix::from_endomorphism(&product))
}
