//! Samplers: Gaussian blocks, Haar matrices, the ergodic ensembles `mu_s` and
//! orbital measures.
//!
//! Every sampler is a pure function of its parameters and an [`RngHandle`];
//! independent ingredients of one draw use distinct sub-streams of the handle.

use alloc::vec::Vec;

use crate::eigen::psd_sqrt;
use crate::math;
use crate::matrix::{cholesky, gram, orthonormalize_columns, solve_upper_right, CornerMatrix, Matrix};
use crate::rng::{Normals, RngHandle};
use crate::scalar::{Field, Scalar};
use crate::spectrum::SpectrumDelta;
use crate::{Error, Result};

/// `n x m` matrix of i.i.d. standard Gaussians, filled row by row from one stream.
pub fn gaussian<T: Scalar>(n: usize, m: usize, rng: RngHandle) -> Matrix<T> {
    let mut src = rng.normals();
    fill_gaussian(n, m, &mut src)
}

fn fill_gaussian<T: Scalar>(n: usize, m: usize, src: &mut Normals) -> Matrix<T> {
    Matrix::from_fn(n, m, |_, _| T::standard_normal(src))
}

/// Field-tagged [`gaussian`].
pub fn gaussian_matrix(n: usize, m: usize, field: Field, rng: RngHandle) -> CornerMatrix {
    match field {
        Field::Real => CornerMatrix::Real(gaussian(n, m, rng)),
        Field::Complex => CornerMatrix::Complex(gaussian(n, m, rng)),
    }
}

/// First `k` columns of a Haar-distributed `O(n)` / `U(n)` matrix: Gram-Schmidt
/// applied to an `n x k` Gaussian block. With `k = n` this is [`haar_square`].
pub fn haar_frame<T: Scalar>(n: usize, k: usize, rng: RngHandle) -> Result<Matrix<T>> {
    match orthonormalize_columns(&gaussian::<T>(n, k, rng.split(0))) {
        // a dependent Gaussian column has probability zero; one retry on a fresh stream
        Err(Error::DegenerateInput { .. }) => {
            orthonormalize_columns(&gaussian::<T>(n, k, rng.split(1)))
        }
        other => other,
    }
}

/// Haar-distributed matrix on `O(n)` (real) or `U(n)` (complex).
pub fn haar_square<T: Scalar>(n: usize, rng: RngHandle) -> Result<Matrix<T>> {
    haar_frame(n, n, rng)
}

/// Field-tagged [`haar_square`].
pub fn haar_matrix(n: usize, field: Field, rng: RngHandle) -> Result<CornerMatrix> {
    Ok(match field {
        Field::Real => CornerMatrix::Real(haar_square(n, rng)?),
        Field::Complex => CornerMatrix::Complex(haar_square(n, rng)?),
    })
}

/// One draw of the top `n` rows of `G diag(s) O` under `mu_s`.
///
/// `C_n(G D_s O) = C_n(G) D_s O`, so a fresh `n x m` Gaussian block and an
/// independent Haar `m x m` factor give the exact finite-dimensional marginal.
pub fn mu_s<T: Scalar>(spec: &SpectrumDelta, n: usize, rng: RngHandle) -> Matrix<T> {
    let m = spec.rank();
    let g = gaussian::<T>(n, m, rng.split(0)).scale_columns(spec.as_slice());
    let o = haar_square::<T>(m, rng.split(1)).expect("Haar sampling failed twice");
    g.matmul(&o).expect("conformable")
}

/// Field-tagged [`mu_s`].
pub fn sample_mu_s(spec: &SpectrumDelta, field: Field, n: usize, rng: RngHandle) -> CornerMatrix {
    match field {
        Field::Real => CornerMatrix::Real(mu_s(spec, n, rng)),
        Field::Complex => CornerMatrix::Complex(mu_s(spec, n, rng)),
    }
}

/// One draw `Z X O` from the orbital measure of the `n x m` block `X` under
/// `O(n) x O(m)` (or `U(n) x U(m)`).
///
/// Writing `X = W [R; 0]` with `W` in `O(n)` and `R = (X^* X)^{1/2}`, right
/// invariance of Haar measure gives `Z X = (Z W)[R; 0] ~ Z[:, :m] R`, so only an
/// `n x m` Haar frame is drawn instead of a full `n x n` matrix.
pub fn orbital<T: Scalar>(block: &Matrix<T>, rng: RngHandle) -> Result<Matrix<T>> {
    let (n, m) = (block.rows(), block.cols());
    if n < m {
        return Err(Error::OutOfRange {
            requested: m,
            available: n,
        });
    }
    let root = psd_sqrt(&gram(block))?;
    let frame = haar_frame::<T>(n, m, rng.split(0))?;
    let o = haar_square::<T>(m, rng.split(1))?;
    frame.matmul(&root)?.matmul(&o)
}

/// Field-tagged [`orbital`].
pub fn orbital_sample(block: &CornerMatrix, rng: RngHandle) -> Result<CornerMatrix> {
    Ok(match block {
        CornerMatrix::Real(x) => CornerMatrix::Real(orbital(x, rng)?),
        CornerMatrix::Complex(x) => CornerMatrix::Complex(orbital(x, rng)?),
    })
}

/// Precomputed orbit data for repeated draws of the top rows of orbital samples.
#[derive(Clone, Debug)]
pub struct OrbitCorner<T> {
    n: usize,
    root: Matrix<T>,
}

impl<T: Scalar> OrbitCorner<T> {
    /// Orbit of the `n x m` block `X` (needs `n >= m`).
    pub fn new(block: &Matrix<T>) -> Result<Self> {
        let (n, m) = (block.rows(), block.cols());
        if n < m {
            return Err(Error::OutOfRange {
                requested: m,
                available: n,
            });
        }
        Ok(OrbitCorner {
            n,
            root: psd_sqrt(&gram(block))?,
        })
    }

    /// Top `rows` rows of one orbital draw `Z X O`, equal in law to
    /// `C_rows(orbital(X))`, in `O(rows * m^2)` work independent of `n`.
    ///
    /// The top rows of the Haar frame are `G_top T^{-1}`, where `T^* T = G^* G`
    /// and `G^* G = G_top^* G_top + W` with `W` an independent Wishart matrix on
    /// `n - rows` degrees of freedom, drawn through its Bartlett factor.
    pub fn sample(&self, rows: usize, rng: RngHandle) -> Result<Matrix<T>> {
        let m = self.root.rows();
        if rows > self.n {
            return Err(Error::OutOfRange {
                requested: rows,
                available: self.n,
            });
        }
        let mut src = rng.split(0).normals();
        let top = fill_gaussian::<T>(rows, m, &mut src);
        let dof = self.n - rows;
        let mut total = gram(&top);
        if dof >= m {
            let l = bartlett_factor::<T>(m, dof, &mut src);
            let w = l.matmul(&l.adjoint())?;
            total = Matrix::from_fn(m, m, |i, j| total[(i, j)] + w[(i, j)]);
        } else if dof > 0 {
            let rest = fill_gaussian::<T>(dof, m, &mut src);
            let w = gram(&rest);
            total = Matrix::from_fn(m, m, |i, j| total[(i, j)] + w[(i, j)]);
        }
        let chol = match cholesky(&total) {
            Ok(c) => c,
            Err(_) => return Err(Error::DegenerateInput { column: 0 }),
        };
        let frame_top = solve_upper_right(&top, &chol);
        let o = haar_square::<T>(m, rng.split(1))?;
        frame_top.matmul(&self.root)?.matmul(&o)
    }
}

/// Lower-triangular `L` with `L L^*` Wishart on `dof` degrees of freedom
/// (identity scale, `dof >= m`).
fn bartlett_factor<T: Scalar>(m: usize, dof: usize, src: &mut Normals) -> Matrix<T> {
    let mut l = Matrix::<T>::zeros(m, m);
    for i in 0..m {
        let d = (dof - i) as f64;
        // |g|^2 summed over d entries: chi-square(d) for reals, Gamma(d, 1) for E|g|^2 = 1 complex
        let diag = match T::FIELD {
            Field::Real => 2.0 * src.gamma(d / 2.0),
            Field::Complex => src.gamma(d),
        };
        l[(i, i)] = T::from_real(math::sqrt(diag));
        for j in 0..i {
            l[(i, j)] = T::standard_normal(src);
        }
    }
    l
}

/// Top `rows` rows of one orbital draw for a field-tagged block.
pub fn orbital_corner(block: &CornerMatrix, rows: usize, rng: RngHandle) -> Result<CornerMatrix> {
    Ok(match block {
        CornerMatrix::Real(x) => CornerMatrix::Real(OrbitCorner::new(x)?.sample(rows, rng)?),
        CornerMatrix::Complex(x) => CornerMatrix::Complex(OrbitCorner::new(x)?.sample(rows, rng)?),
    })
}

/// `sqrt(n) * W * D_s` where `W` is the first `m` columns of the `n x n`
/// identity: a deterministic block whose scaled Gram matrix is exactly `D_s^2`.
pub fn diagonal_block<T: Scalar>(spec: &SpectrumDelta, n: usize) -> Matrix<T> {
    let r = math::sqrt(n as f64);
    let d: Vec<f64> = spec.as_slice().iter().map(|x| x * r).collect();
    Matrix::from_diagonal(n, spec.rank(), &d)
}

/// `sqrt(n) * Q` for an `n x m` matrix with orthonormal columns; its scaled Gram
/// matrix is the identity.
pub fn scaled_frame<T: Scalar>(n: usize, m: usize, rng: RngHandle) -> Result<Matrix<T>> {
    Ok(haar_frame::<T>(n, m, rng)?.scaled(math::sqrt(n as f64)))
}
