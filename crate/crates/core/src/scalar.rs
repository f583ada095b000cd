//! Real and complex scalars behind one trait so the kernels are written once.

use core::fmt::Debug;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::matrix::Matrix;
use crate::rng::Normals;

/// Which of `Mat(N x m, R)` or `Mat(N x m, C)` a matrix lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    pub fn as_str(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }

    pub fn parse(s: &str) -> Option<Field> {
        match s {
            "real" => Some(Field::Real),
            "complex" => Some(Field::Complex),
            _ => None,
        }
    }
}

impl core::fmt::Display for Field {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

pub trait Scalar:
    Copy
    + Debug
    + Default
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    const FIELD: Field;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(x: f64) -> Self;
    fn conj(self) -> Self;
    fn re(self) -> f64;
    fn im(self) -> f64;
    /// `|x|^2`
    fn abs_sq(self) -> f64;
    fn scale(self, x: f64) -> Self;
    /// Division by a real; `x / |x|` is exactly a unit for reals.
    fn unscale(self, x: f64) -> Self;
    fn is_finite(self) -> bool;

    /// Standard Gaussian: `N(0, 1)` for reals; `E|g|^2 = 1`, `E g^2 = 0` for complex.
    fn standard_normal(src: &mut Normals) -> Self;

    /// Real symmetric image of a Hermitian matrix under `A -> [[Re A, -Im A], [Im A, Re A]]`.
    ///
    /// The map is a *-homomorphism, so spectral functions commute with it and every
    /// eigenvalue of `A` appears `EMBED` times in the image.
    fn embed(m: &Matrix<Self>) -> Matrix<f64>;
    /// Inverse of [`Scalar::embed`] on matrices in its image.
    fn unembed(m: &Matrix<f64>) -> Matrix<Self>;
    const EMBED: usize;
}

impl Scalar for f64 {
    const FIELD: Field = Field::Real;
    const EMBED: usize = 1;

    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn one() -> Self {
        1.0
    }
    #[inline]
    fn from_real(x: f64) -> Self {
        x
    }
    #[inline]
    fn conj(self) -> Self {
        self
    }
    #[inline]
    fn re(self) -> f64 {
        self
    }
    #[inline]
    fn im(self) -> f64 {
        0.0
    }
    #[inline]
    fn abs_sq(self) -> f64 {
        self * self
    }
    #[inline]
    fn scale(self, x: f64) -> Self {
        self * x
    }
    #[inline]
    fn unscale(self, x: f64) -> Self {
        self / x
    }
    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    #[inline]
    fn standard_normal(src: &mut Normals) -> Self {
        src.normal()
    }
    fn embed(m: &Matrix<Self>) -> Matrix<f64> {
        m.clone()
    }
    fn unembed(m: &Matrix<f64>) -> Matrix<Self> {
        m.clone()
    }
}

impl Scalar for Complex64 {
    const FIELD: Field = Field::Complex;
    const EMBED: usize = 2;

    #[inline]
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    #[inline]
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    #[inline]
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    #[inline]
    fn conj(self) -> Self {
        Complex64::new(self.re, -self.im)
    }
    #[inline]
    fn re(self) -> f64 {
        self.re
    }
    #[inline]
    fn im(self) -> f64 {
        self.im
    }
    #[inline]
    fn abs_sq(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
    #[inline]
    fn scale(self, x: f64) -> Self {
        Complex64::new(self.re * x, self.im * x)
    }
    #[inline]
    fn unscale(self, x: f64) -> Self {
        Complex64::new(self.re / x, self.im / x)
    }
    #[inline]
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    #[inline]
    fn standard_normal(src: &mut Normals) -> Self {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let re = src.normal();
        let im = src.normal();
        Complex64::new(re * h, im * h)
    }

    fn embed(m: &Matrix<Self>) -> Matrix<f64> {
        let (r, c) = (m.rows(), m.cols());
        Matrix::from_fn(2 * r, 2 * c, |i, j| {
            let z = m[(i % r, j % c)];
            match (i < r, j < c) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        })
    }

    fn unembed(m: &Matrix<f64>) -> Matrix<Self> {
        let (r, c) = (m.rows() / 2, m.cols() / 2);
        Matrix::from_fn(r, c, |i, j| Complex64::new(m[(i, j)], m[(i + r, j)]))
    }
}
