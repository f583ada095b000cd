//! Dense row-major matrices and the kernels shared by every other module.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::math;
use crate::scalar::{Field, Scalar};
use crate::{Error, Result};

/// Dense `rows x cols` matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    /// `rows x cols` matrix whose first `min(rows, cols)` diagonal entries are `diag`.
    pub fn from_diagonal(rows: usize, cols: usize, diag: &[f64]) -> Self {
        Self::from_fn(rows, cols, |i, j| {
            if i == j && i < diag.len() {
                T::from_real(diag[i])
            } else {
                T::zero()
            }
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Checked constructor: `data.len() == rows * cols` and every entry finite.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ShapeMismatch(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if !data.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Matrix { rows, cols, data })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &Matrix<T>) -> Result<Matrix<T>> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == T::zero() {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `A * diag(d)`: column `j` scaled by `d[j]`.
    pub fn scale_columns(&self, d: &[f64]) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].scale(d[j]))
    }

    pub fn scaled(&self, x: f64) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.scale(x)).collect(),
        }
    }

    /// Upper `n x cols` block.
    pub fn top_rows(&self, n: usize) -> Result<Self> {
        if n > self.rows {
            return Err(Error::OutOfRange {
                requested: n,
                available: self.rows,
            });
        }
        Ok(Matrix {
            rows: n,
            cols: self.cols,
            data: self.data[..n * self.cols].to_vec(),
        })
    }

    /// Real parts of the leading `min(rows, cols)` diagonal entries.
    pub fn diagonal_re(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].re())
            .collect()
    }

    pub fn trace_re(&self) -> f64 {
        self.diagonal_re().iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        math::sqrt(self.data.iter().map(|x| x.abs_sq()).sum())
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .map(|x| math::sqrt(x.abs_sq()))
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix<T>) -> f64 {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| math::sqrt((a - b).abs_sq()))
            .fold(0.0, f64::max)
    }

    /// `max |A^* A - I|` over entries.
    pub fn unitarity_defect(&self) -> f64 {
        let g = gram(self);
        g.max_abs_diff(&Matrix::identity(self.cols))
    }

    /// `max |A_ij - conj(A_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = self[(i, j)] - self[(j, i)].conj();
                worst = worst.max(math::sqrt(d.abs_sq()));
            }
        }
        worst
    }

    /// `(A + A^*) / 2`.
    pub fn symmetrized(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()).scale(0.5)
        })
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// `A^* A` (unscaled, exactly Hermitian).
pub fn gram<T: Scalar>(a: &Matrix<T>) -> Matrix<T> {
    let m = a.cols();
    let mut g = Matrix::<T>::zeros(m, m);
    for i in 0..a.rows() {
        let row = a.row(i);
        for p in 0..m {
            let cp = row[p].conj();
            for q in p..m {
                g[(p, q)] += cp * row[q];
            }
        }
    }
    for p in 0..m {
        g[(p, p)] = T::from_real(g[(p, p)].re());
        for q in p + 1..m {
            g[(q, p)] = g[(p, q)].conj();
        }
    }
    g
}

/// Scaled Gram matrix `(X^* X) / n` of an `n x m` corner.
pub fn gram_scaled<T: Scalar>(xn: &Matrix<T>) -> Matrix<T> {
    let n = xn.rows() as f64;
    gram(xn).scaled(1.0 / n)
}

/// Corner truncation `C_n`: the top `n` rows.
pub fn truncate_corner<T: Scalar>(x: &Matrix<T>, n: usize) -> Result<Matrix<T>> {
    x.top_rows(n)
}

/// Orthonormalize the columns of a tall `n x k` matrix (`k <= n`) by modified
/// Gram-Schmidt with one full re-orthogonalization pass.
///
/// The implicit triangular factor has a positive real diagonal, so the result
/// is the unique `Q` with `A = Q R`, `R` upper triangular, `R_jj > 0`.
pub fn orthonormalize_columns<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    let (n, k) = (a.rows(), a.cols());
    if k > n {
        return Err(Error::ShapeMismatch(format!(
            "cannot orthonormalize {k} columns in dimension {n}"
        )));
    }
    let mut q: Vec<Vec<T>> = Vec::with_capacity(k);
    for j in 0..k {
        let mut v = a.column(j);
        let original = norm(&v);
        if original == 0.0 {
            return Err(Error::DegenerateInput { column: j });
        }
        for _pass in 0..2 {
            for qi in &q {
                let mut r = T::zero();
                for (x, y) in qi.iter().zip(&v) {
                    r += x.conj() * *y;
                }
                for (y, x) in v.iter_mut().zip(qi) {
                    *y -= *x * r;
                }
            }
        }
        let residual = norm(&v);
        if !(residual >= 1e-13 * original) {
            return Err(Error::DegenerateInput { column: j });
        }
        for y in v.iter_mut() {
            *y = y.unscale(residual);
        }
        q.push(v);
    }
    Ok(Matrix::from_fn(n, k, |i, j| q[j][i]))
}

/// Gram-Schmidt on the columns of a square matrix; output is orthogonal/unitary.
pub fn gram_schmidt<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "gram_schmidt expects a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    orthonormalize_columns(a)
}

fn norm<T: Scalar>(v: &[T]) -> f64 {
    math::sqrt(v.iter().map(|x| x.abs_sq()).sum())
}

/// Lower Cholesky factor `L` (`A = L L^*`, positive real diagonal) of a Hermitian
/// positive definite matrix.
pub fn cholesky<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    let m = a.rows();
    let mut l = Matrix::<T>::zeros(m, m);
    for j in 0..m {
        let mut d = a[(j, j)].re();
        for k in 0..j {
            d -= l[(j, k)].abs_sq();
        }
        if !(d > 0.0) {
            return Err(Error::NotPositiveSemidefinite { eigenvalue: d });
        }
        let djj = math::sqrt(d);
        l[(j, j)] = T::from_real(djj);
        for i in j + 1..m {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s.scale(1.0 / djj);
        }
    }
    Ok(l)
}

/// Solve `X U = B` for `X` with `U` upper triangular (`U = L^*` of [`cholesky`]).
pub fn solve_upper_right<T: Scalar>(b: &Matrix<T>, lower: &Matrix<T>) -> Matrix<T> {
    // U = L^*, so U[k][j] = conj(L[j][k]) and U[j][j] is real.
    let m = lower.rows();
    let mut x = Matrix::zeros(b.rows(), m);
    for i in 0..b.rows() {
        for j in 0..m {
            let mut s = b[(i, j)];
            for k in 0..j {
                s -= x[(i, k)] * lower[(j, k)].conj();
            }
            x[(i, j)] = s.scale(1.0 / lower[(j, j)].re());
        }
    }
    x
}

/// A corner block over either field, as exchanged with samplers, estimators and files.
#[derive(Clone, Debug, PartialEq)]
pub enum CornerMatrix {
    Real(Matrix<f64>),
    Complex(Matrix<Complex64>),
}

macro_rules! dispatch {
    ($x:expr, $m:ident => $body:expr) => {
        match $x {
            CornerMatrix::Real($m) => $body,
            CornerMatrix::Complex($m) => $body,
        }
    };
}
pub(crate) use dispatch;

impl CornerMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        match field {
            Field::Real => CornerMatrix::Real(Matrix::zeros(rows, cols)),
            Field::Complex => CornerMatrix::Complex(Matrix::zeros(rows, cols)),
        }
    }

    pub fn field(&self) -> Field {
        match self {
            CornerMatrix::Real(_) => Field::Real,
            CornerMatrix::Complex(_) => Field::Complex,
        }
    }

    pub fn rows(&self) -> usize {
        dispatch!(self, m => m.rows())
    }

    pub fn cols(&self) -> usize {
        dispatch!(self, m => m.cols())
    }

    /// Row-major entries; complex entries interleaved as `re, im`.
    pub fn to_interleaved(&self) -> Vec<f64> {
        match self {
            CornerMatrix::Real(m) => m.as_slice().to_vec(),
            CornerMatrix::Complex(m) => m.as_slice().iter().flat_map(|z| [z.re, z.im]).collect(),
        }
    }

    /// Inverse of [`CornerMatrix::to_interleaved`], validating length and finiteness.
    pub fn from_interleaved(field: Field, rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        match field {
            Field::Real => Ok(CornerMatrix::Real(Matrix::from_vec(rows, cols, data.to_vec())?)),
            Field::Complex => {
                if data.len() != 2 * rows * cols {
                    return Err(Error::ShapeMismatch(format!(
                        "{} values for a complex {rows}x{cols} matrix",
                        data.len()
                    )));
                }
                let entries = data
                    .chunks_exact(2)
                    .map(|p| Complex64::new(p[0], p[1]))
                    .collect();
                Ok(CornerMatrix::Complex(Matrix::from_vec(rows, cols, entries)?))
            }
        }
    }

    pub fn truncate(&self, n: usize) -> Result<Self> {
        Ok(match self {
            CornerMatrix::Real(m) => CornerMatrix::Real(truncate_corner(m, n)?),
            CornerMatrix::Complex(m) => CornerMatrix::Complex(truncate_corner(m, n)?),
        })
    }

    pub fn scaled(&self, x: f64) -> Self {
        match self {
            CornerMatrix::Real(m) => CornerMatrix::Real(m.scaled(x)),
            CornerMatrix::Complex(m) => CornerMatrix::Complex(m.scaled(x)),
        }
    }

    pub fn diagonal_re(&self) -> Vec<f64> {
        dispatch!(self, m => m.diagonal_re())
    }

    pub fn max_abs(&self) -> f64 {
        dispatch!(self, m => m.max_abs())
    }

    /// Real version of the block; complex entries are promoted with zero imaginary part.
    pub fn to_complex(&self) -> Matrix<Complex64> {
        match self {
            CornerMatrix::Real(m) => {
                Matrix::from_fn(m.rows(), m.cols(), |i, j| Complex64::new(m[(i, j)], 0.0))
            }
            CornerMatrix::Complex(m) => m.clone(),
        }
    }

    pub fn same_shape(&self, other: &CornerMatrix) -> bool {
        self.field() == other.field() && self.rows() == other.rows() && self.cols() == other.cols()
    }
}

impl From<Matrix<f64>> for CornerMatrix {
    fn from(m: Matrix<f64>) -> Self {
        CornerMatrix::Real(m)
    }
}

impl From<Matrix<Complex64>> for CornerMatrix {
    fn from(m: Matrix<Complex64>) -> Self {
        CornerMatrix::Complex(m)
    }
}
