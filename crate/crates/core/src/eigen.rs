//! Small Hermitian eigenproblems by cyclic Jacobi rotations.
//!
//! Matrices here are at most `64 x 64` (the rank `m`), so an `O(m^3)` sweep
//! per iteration is cheap. Complex Hermitian input is handled through its real
//! symmetric embedding, in which every eigenvalue appears twice.

use alloc::vec::Vec;

use crate::math;
use crate::matrix::{gram, gram_scaled, Matrix};
use crate::scalar::Scalar;
use crate::{Error, Result};

const MAX_SWEEPS: usize = 60;
const OFF_DIAGONAL_TOL: f64 = 1e-13;
const HERMITIAN_TOL: f64 = 1e-8;
const PSD_TOL: f64 = 1e-10;

/// Eigen-decomposition of a real symmetric matrix: eigenvalues (descending) and
/// the matching eigenvectors as columns.
pub fn jacobi_symmetric(a: &Matrix<f64>) -> Result<(Vec<f64>, Matrix<f64>)> {
    let n = a.rows();
    let mut a = a.clone();
    let mut v = Matrix::<f64>::identity(n);
    let scale = a.frobenius_norm();

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    off += a[(p, q)] * a[(p, q)];
                }
            }
        }
        if math::sqrt(off) <= OFF_DIAGONAL_TOL * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + math::sqrt(theta * theta + 1.0))
                } else {
                    -1.0 / (-theta + math::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / math::sqrt(t * t + 1.0);
                let s = t * c;
                rotate(&mut a, &mut v, p, q, c, s);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence("Jacobi sweeps"));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok((values, vectors))
}

// A <- J^T A J and V <- V J for the plane rotation in (p, q) that zeroes A[p][q].
fn rotate(a: &mut Matrix<f64>, v: &mut Matrix<f64>, p: usize, q: usize, c: f64, s: f64) {
    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

fn check_hermitian<T: Scalar>(m: &Matrix<T>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch(alloc::format!(
            "expected a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let norm = m.frobenius_norm();
    let asymmetry = m.hermitian_defect();
    if asymmetry > HERMITIAN_TOL * norm {
        return Err(Error::NotHermitian { asymmetry, norm });
    }
    Ok(())
}

fn embedded_decomposition<T: Scalar>(m: &Matrix<T>) -> Result<(Vec<f64>, Matrix<f64>)> {
    check_hermitian(m)?;
    jacobi_symmetric(&T::embed(&m.symmetrized()))
}

/// Eigenvalues of a Hermitian matrix, descending (no sign constraint).
pub fn hermitian_eigenvalues<T: Scalar>(m: &Matrix<T>) -> Result<Vec<f64>> {
    let (values, _) = embedded_decomposition(m)?;
    Ok(values.into_iter().step_by(T::EMBED).collect())
}

/// Eigenvalues of a Hermitian positive semidefinite matrix, descending and
/// clamped to be nonnegative.
pub fn sym_eigen_psd<T: Scalar>(m: &Matrix<T>) -> Result<Vec<f64>> {
    let values = hermitian_eigenvalues(m)?;
    let floor = -PSD_TOL * m.frobenius_norm().max(1.0);
    if let Some(&worst) = values.last() {
        if worst < floor {
            return Err(Error::NotPositiveSemidefinite { eigenvalue: worst });
        }
    }
    Ok(values.into_iter().map(|x| x.max(0.0)).collect())
}

/// Principal square root of a Hermitian positive semidefinite matrix.
pub fn psd_sqrt<T: Scalar>(m: &Matrix<T>) -> Result<Matrix<T>> {
    let (values, vectors) = embedded_decomposition(m)?;
    let floor = -PSD_TOL * m.frobenius_norm().max(1.0);
    let roots: Vec<f64> = values
        .iter()
        .map(|&x| {
            if x < floor {
                Err(Error::NotPositiveSemidefinite { eigenvalue: x })
            } else {
                Ok(math::sqrt(x.max(0.0)))
            }
        })
        .collect::<Result<_>>()?;
    let root = vectors
        .scale_columns(&roots)
        .matmul(&vectors.adjoint())?
        .symmetrized();
    Ok(T::unembed(&root))
}

/// `tr(M^k)` for Hermitian PSD `M`, as the `k`-th power sum of its eigenvalues.
pub fn trace_power<T: Scalar>(m: &Matrix<T>, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("trace power needs k >= 1".into()));
    }
    Ok(sym_eigen_psd(m)?
        .iter()
        .map(|&x| math::powi(x, k))
        .sum())
}

/// Singular values (descending) of an `n x m` block with `n >= m`.
pub fn singular_values<T: Scalar>(b: &Matrix<T>) -> Result<Vec<f64>> {
    if b.rows() < b.cols() {
        return Err(Error::OutOfRange {
            requested: b.cols(),
            available: b.rows(),
        });
    }
    Ok(sym_eigen_psd(&gram(b))?
        .into_iter()
        .map(math::sqrt)
        .collect())
}

/// Eigenvalues of the scaled Gram matrix `(X^* X)/n`, descending.
pub fn scaled_gram_spectrum<T: Scalar>(xn: &Matrix<T>) -> Result<Vec<f64>> {
    sym_eigen_psd(&gram_scaled(xn))
}
