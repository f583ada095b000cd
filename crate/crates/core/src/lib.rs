//! Simulation and inference for ergodic measures on infinite matrices of finite rank.
//!
//! The ergodic probability measures on `Mat(N x m)` that are invariant under
//! `(u, v) . X = u X v^-1` (with `u` in `O(inf)` or `U(inf)` and `v` in `O(m)` or
//! `U(m)`) form the family `mu_s = Law(G diag(s) O)` indexed by descending
//! nonnegative `s`. This crate samples those ensembles at finite truncation,
//! recovers `s` from a corner of a sample, decomposes invariant mixtures into
//! ergodic atoms, evaluates characteristic functionals, and ships statistical
//! suites that check each constructive step numerically.
//!
//! The crate is `no_std` (it needs `alloc`). All floating point goes through
//! `libm`, so results are bit-identical across platforms for a given seed.
//! IO, file formats and the command line live in the `ergmat` companion crate.
#![no_std]
#![forbid(unsafe_code)]
// `!(x <= tol)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod battery;
pub mod characteristic;
pub mod decomposition;
pub mod diagnostics;
mod dd;
pub mod eigen;
mod error;
pub mod exec;
mod math;
pub mod matrix;
pub mod moments;
mod poly;
pub mod rng;
pub mod sampling;
pub mod scalar;
pub mod spectrum;
pub mod stats;




pub use characteristic::{CfEvaluation, CfGrid};
pub use decomposition::{Atom, EmpiricalMixture, SeparationReport};
pub use diagnostics::{Detail, TestReport};
pub use error::{Error, Result};
pub use exec::{Executor, Serial};
pub use matrix::{CornerMatrix, Matrix};
pub use moments::{EstimateMethod, MomentVector, SpectrumEstimate};
pub use rng::RngHandle;
pub use scalar::{Field, Scalar};
pub use spectrum::SpectrumDelta;

pub use num_complex::Complex64;
