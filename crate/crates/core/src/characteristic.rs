//! Characteristic functionals at diagonal directions.
//!
//! For an invariant measure `mu` on `n x m` corners, `mu^(D_lambda) = E exp(i <D_lambda, X>)`
//! with `<D_lambda, X> = sum_l lambda_l Re X_ll`. These values determine `mu`
//! and metrize weak convergence on compacts, so they are the common currency
//! for comparing ensembles.
//!
//! For `mu_s` the Gaussian integral over `G` is explicit, leaving an average
//! over the Haar factor `O` alone:
//! `mu_s^(D_lambda) = E_O exp(-sum_(l,j) lambda_l^2 s_j^2 |O_jl|^2 / c)` with
//! `c = 2` for reals and `c = 4` for the complex normalization `E|g|^2 = 1`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::exec::{map_chunks, Executor};
use crate::math;
use crate::matrix::{CornerMatrix, Matrix};
use crate::rng::RngHandle;
use crate::sampling::haar_square;
use crate::scalar::{Field, Scalar};
use crate::spectrum::SpectrumDelta;
use crate::stats::Moments;
use crate::{Error, Result};

/// Finite set of directions `lambda` in the parameter sector.
#[derive(Clone, Debug, PartialEq)]
pub struct CfGrid {
    m: usize,
    points: Vec<SpectrumDelta>,
}

/// Levels of the default tensor grid.
pub const DEFAULT_LEVELS: [f64; 4] = [0.0, 0.5, 1.0, 2.0];
/// Cap on the number of default grid points.
pub const DEFAULT_MAX_POINTS: usize = 200;

impl CfGrid {
    /// Nonempty list of points of a common rank.
    pub fn new(points: Vec<SpectrumDelta>) -> Result<Self> {
        let m = points
            .first()
            .map(SpectrumDelta::rank)
            .ok_or_else(|| Error::InvalidParameter("empty grid".into()))?;
        if let Some(p) = points.iter().find(|p| p.rank() != m) {
            return Err(Error::RankMismatch {
                expected: m,
                found: p.rank(),
            });
        }
        Ok(CfGrid { m, points })
    }

    /// Points of `{0, 0.5, 1, 2}^m` in the descending sector, in lexicographic
    /// order, at most 200 of them.
    pub fn default_for_rank(m: usize) -> Self {
        let mut points = Vec::new();
        let mut idx = alloc::vec![0usize; m];
        'outer: loop {
            let lambda: Vec<f64> = idx.iter().map(|&i| DEFAULT_LEVELS[i]).collect();
            points.push(SpectrumDelta::new(lambda).expect("descending by construction"));
            if points.len() == DEFAULT_MAX_POINTS {
                break;
            }
            // next non-increasing index tuple
            let mut pos = m;
            loop {
                if pos == 0 {
                    break 'outer;
                }
                pos -= 1;
                let cap = if pos == 0 { DEFAULT_LEVELS.len() - 1 } else { idx[pos - 1] };
                if idx[pos] < cap {
                    idx[pos] += 1;
                    for later in idx.iter_mut().skip(pos + 1) {
                        *later = 0;
                    }
                    break;
                }
            }
        }
        CfGrid { m, points }
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn points(&self) -> &[SpectrumDelta] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Values of a characteristic functional on a grid, with Monte Carlo standard errors.
#[derive(Clone, Debug, PartialEq)]
pub struct CfEvaluation {
    pub grid: CfGrid,
    pub values: Vec<Complex64>,
    pub stderr: Vec<f64>,
}

/// Running mean of `exp(i phase)` (or of a real integrand) at every grid point.
#[derive(Clone, Debug)]
pub struct CfAccumulator {
    re: Vec<Moments>,
    im: Vec<Moments>,
}

impl CfAccumulator {
    pub fn new(points: usize) -> Self {
        CfAccumulator {
            re: alloc::vec![Moments::new(); points],
            im: alloc::vec![Moments::new(); points],
        }
    }

    /// Adds `exp(i <D_lambda, X>)` for every grid point, given `Re X_ll` for `l < m`.
    pub fn observe_diagonal(&mut self, grid: &CfGrid, diag: &[f64]) {
        for (k, lambda) in grid.points.iter().enumerate() {
            let phase: f64 = lambda.as_slice().iter().zip(diag).map(|(l, x)| l * x).sum();
            if phase == 0.0 {
                self.re[k].push(1.0);
                self.im[k].push(0.0);
            } else {
                let (s, c) = math::sin_cos(phase);
                self.re[k].push(c);
                self.im[k].push(s);
            }
        }
    }

    /// Adds a real observation at grid point `k`.
    pub fn observe_real(&mut self, k: usize, value: f64) {
        self.re[k].push(value);
        self.im[k].push(0.0);
    }

    pub fn merge(&mut self, other: &CfAccumulator) {
        for (a, b) in self.re.iter_mut().zip(&other.re) {
            a.merge(b);
        }
        for (a, b) in self.im.iter_mut().zip(&other.im) {
            a.merge(b);
        }
    }

    pub fn count(&self) -> u64 {
        self.re.first().map_or(0, Moments::count)
    }

    pub fn finish(self, grid: &CfGrid) -> CfEvaluation {
        let values = self
            .re
            .iter()
            .zip(&self.im)
            .map(|(r, i)| Complex64::new(r.mean(), i.mean()))
            .collect();
        let stderr = self
            .re
            .iter()
            .zip(&self.im)
            .map(|(r, i)| {
                let n = r.count().max(1) as f64;
                math::sqrt((r.variance() + i.variance()) / n)
            })
            .collect();
        CfEvaluation {
            grid: grid.clone(),
            values,
            stderr,
        }
    }
}

/// `mu_s^(D_lambda)` on `grid` by averaging the closed-form Gaussian integral
/// over `iters` Haar draws of `O` (one draw per iteration, shared by all points).
pub fn cf_mu_s<E: Executor + ?Sized>(
    spec: &SpectrumDelta,
    grid: &CfGrid,
    field: Field,
    iters: usize,
    rng: RngHandle,
    exec: &E,
) -> Result<CfEvaluation> {
    if iters == 0 {
        return Err(Error::InvalidParameter("at least one Monte Carlo iteration is required".into()));
    }
    if grid.rank() != spec.rank() {
        return Err(Error::RankMismatch {
            expected: spec.rank(),
            found: grid.rank(),
        });
    }
    match field {
        Field::Real => cf_mu_s_field::<f64, E>(spec, grid, iters, rng, exec),
        Field::Complex => cf_mu_s_field::<Complex64, E>(spec, grid, iters, rng, exec),
    }
}

fn cf_mu_s_field<T: Scalar, E: Executor + ?Sized>(
    spec: &SpectrumDelta,
    grid: &CfGrid,
    iters: usize,
    rng: RngHandle,
    exec: &E,
) -> Result<CfEvaluation> {
    let m = spec.rank();
    let denom = match T::FIELD {
        Field::Real => 2.0,
        Field::Complex => 4.0,
    };
    let s2: Vec<f64> = spec.as_slice().iter().map(|s| s * s).collect();
    let parts = map_chunks(exec, iters, |range| -> Result<CfAccumulator> {
        let mut acc = CfAccumulator::new(grid.len());
        let mut weights = alloc::vec![0.0; m];
        for i in range {
            let o: Matrix<T> = haar_square(m, rng.split(i as u64))?;
            // w_l = sum_j s_j^2 |O_jl|^2
            for (l, w) in weights.iter_mut().enumerate() {
                *w = (0..m).map(|j| s2[j] * o[(j, l)].abs_sq()).sum();
            }
            for (k, lambda) in grid.points.iter().enumerate() {
                let q: f64 = lambda
                    .as_slice()
                    .iter()
                    .zip(&weights)
                    .map(|(l, w)| l * l * w)
                    .sum();
                acc.observe_real(k, if q == 0.0 { 1.0 } else { math::exp(-q / denom) });
            }
        }
        Ok(acc)
    });
    let mut total = CfAccumulator::new(grid.len());
    for part in parts {
        total.merge(&part?);
    }
    Ok(total.finish(grid))
}

/// Empirical characteristic functional of a sample set (all of one shape, `n >= m`).
pub fn empirical_cf(samples: &[CornerMatrix], grid: &CfGrid) -> Result<CfEvaluation> {
    let first = samples.first().ok_or(Error::EmptySampleSet)?;
    if first.cols() != grid.rank() {
        return Err(Error::RankMismatch {
            expected: grid.rank(),
            found: first.cols(),
        });
    }
    if first.rows() < first.cols() {
        return Err(Error::OutOfRange {
            requested: first.cols(),
            available: first.rows(),
        });
    }
    let mut acc = CfAccumulator::new(grid.len());
    for x in samples {
        if !x.same_shape(first) {
            return Err(Error::ShapeMismatch(
                "samples must share field and dimensions".into(),
            ));
        }
        acc.observe_diagonal(grid, &x.diagonal_re());
    }
    Ok(acc.finish(grid))
}

/// `max_lambda |a(lambda) - b(lambda)|`.
pub fn cf_sup_distance(a: &CfEvaluation, b: &CfEvaluation) -> Result<f64> {
    Ok(cf_gaps(a, b)?.iter().map(|g| g.gap).fold(0.0, f64::max))
}

/// Pointwise discrepancy between two evaluations on a common grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CfGap {
    pub gap: f64,
    /// `sqrt(se_a^2 + se_b^2)`.
    pub stderr: f64,
}

impl CfGap {
    /// Gap in units of the combined standard error (0 for a zero gap, infinite
    /// for a nonzero gap with zero error).
    pub fn standardized(&self) -> f64 {
        if self.gap == 0.0 {
            0.0
        } else {
            self.gap / self.stderr
        }
    }
}

pub fn cf_gaps(a: &CfEvaluation, b: &CfEvaluation) -> Result<Vec<CfGap>> {
    if a.grid != b.grid || a.values.len() != b.values.len() {
        return Err(Error::GridMismatch);
    }
    Ok(a.values
        .iter()
        .zip(&b.values)
        .zip(a.stderr.iter().zip(&b.stderr))
        .map(|((x, y), (sa, sb))| CfGap {
            gap: (x - y).norm(),
            stderr: math::sqrt(sa * sa + sb * sb),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Serial;
    use crate::sampling::sample_mu_s;
    use alloc::vec;

    fn spec(v: &[f64]) -> SpectrumDelta {
        SpectrumDelta::new(v.to_vec()).unwrap()
    }

    fn grid(points: &[&[f64]]) -> CfGrid {
        CfGrid::new(points.iter().map(|p| spec(p)).collect()).unwrap()
    }

    #[test]
    fn default_grid_shape() {
        let g1 = CfGrid::default_for_rank(1);
        assert_eq!(g1.len(), 4);
        let g2 = CfGrid::default_for_rank(2);
        assert_eq!(g2.len(), 10);
        assert_eq!(CfGrid::default_for_rank(3).len(), 20);
        assert_eq!(CfGrid::default_for_rank(12).len(), 200);
        assert_eq!(g2.points()[0], SpectrumDelta::zeros(2));
    }

    #[test]
    fn value_at_origin_is_one() {
        let g = CfGrid::default_for_rank(3);
        for field in [Field::Real, Field::Complex] {
            let cf = cf_mu_s(&spec(&[3.0, 2.0, 1.0]), &g, field, 50, RngHandle::new(1, 0), &Serial).unwrap();
            assert_eq!(cf.values[0], Complex64::new(1.0, 0.0));
            assert_eq!(cf.stderr[0], 0.0);
        }
    }

    #[test]
    fn rank_one_real_is_closed_form() {
        let g = grid(&[&[0.5], &[1.0], &[2.0], &[3.7]]);
        let s = 1.3;
        let cf = cf_mu_s(&spec(&[s]), &g, Field::Real, 17, RngHandle::new(2, 0), &Serial).unwrap();
        for (p, v) in g.points().iter().zip(&cf.values) {
            let l = p.as_slice()[0];
            assert!((v.re - (-l * l * s * s / 2.0).exp()).abs() < 1e-12);
        }
        assert!(cf.stderr.iter().all(|&e| e == 0.0));
    }

    #[test]
    fn zero_spectrum_is_dirac() {
        let g = CfGrid::default_for_rank(2);
        let cf = cf_mu_s(&SpectrumDelta::zeros(2), &g, Field::Complex, 10, RngHandle::new(3, 0), &Serial).unwrap();
        assert!(cf.values.iter().all(|v| *v == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn sup_distance_examples() {
        let g = grid(&[&[1.0]]);
        let a = cf_mu_s(&spec(&[1.0]), &g, Field::Real, 4, RngHandle::new(0, 0), &Serial).unwrap();
        let b = cf_mu_s(&spec(&[2.0]), &g, Field::Real, 4, RngHandle::new(0, 1), &Serial).unwrap();
        assert_eq!(cf_sup_distance(&a, &a).unwrap(), 0.0);
        let expected = (-0.5f64).exp() - (-2.0f64).exp();
        assert!((cf_sup_distance(&a, &b).unwrap() - expected).abs() < 1e-12);
        let other = cf_mu_s(&spec(&[1.0]), &grid(&[&[2.0]]), Field::Real, 4, RngHandle::new(0, 0), &Serial).unwrap();
        assert_eq!(cf_sup_distance(&a, &other), Err(Error::GridMismatch));
    }

    #[test]
    fn reproducible_across_seeds() {
        let g = CfGrid::default_for_rank(2);
        let s = spec(&[2.0, 1.0]);
        let a = cf_mu_s(&s, &g, Field::Real, 20_000, RngHandle::new(4, 0), &Serial).unwrap();
        let b = cf_mu_s(&s, &g, Field::Real, 20_000, RngHandle::new(5, 0), &Serial).unwrap();
        for gap in cf_gaps(&a, &b).unwrap() {
            assert!(gap.gap <= 4.0 * gap.stderr + 1e-15, "{gap:?}");
        }
    }

    #[test]
    fn monotone_in_s_for_rank_one() {
        let g = grid(&[&[0.7]]);
        let mut last = 2.0;
        for s in [0.1, 0.5, 1.0, 2.0, 4.0] {
            let v = cf_mu_s(&spec(&[s]), &g, Field::Real, 1, RngHandle::new(0, 0), &Serial).unwrap().values[0].re;
            assert!(v < last);
            last = v;
        }
    }

    #[test]
    fn escapes_to_zero() {
        let g = grid(&[&[1.0]]);
        let mut last = 2.0;
        for s1 in [1.0, 10.0, 100.0] {
            let v = cf_mu_s(&spec(&[s1]), &g, Field::Real, 1, RngHandle::new(6, 0), &Serial).unwrap().values[0].re;
            assert!(v < last);
            last = v;
        }
        assert!(last < 1e-6, "{last}");
    }

    #[test]
    fn escapes_like_inverse_s1_for_rank_two() {
        // the Haar average keeps mass where |O_11| ~ 1/s_1
        let g = grid(&[&[1.0, 0.0]]);
        let mut last = 2.0;
        for s1 in [1.0, 10.0, 100.0, 1000.0] {
            let v = cf_mu_s(&spec(&[s1, 0.5]), &g, Field::Real, 4000, RngHandle::new(6, 0), &Serial).unwrap().values[0].re;
            assert!(v < last);
            if s1 >= 100.0 {
                assert!(v * s1 < 2.0, "{v}");
            }
            last = v;
        }
    }

    #[test]
    fn empirical_examples() {
        let g = CfGrid::default_for_rank(2);
        let zero = vec![CornerMatrix::zeros(Field::Real, 4, 2)];
        let cf = empirical_cf(&zero, &g).unwrap();
        assert!(cf.values.iter().all(|v| *v == Complex64::new(1.0, 0.0)));
        assert_eq!(empirical_cf(&[], &g), Err(Error::EmptySampleSet));

        let s = spec(&[2.0, 1.0]);
        let samples: Vec<_> = (0..3).map(|i| sample_mu_s(&s, Field::Complex, 5, RngHandle::new(7, i))).collect();
        let cf = empirical_cf(&samples, &g).unwrap();
        assert_eq!(cf.values[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn empirical_matches_semi_analytic() {
        let g = grid(&[&[0.5, 0.0], &[1.0, 0.5], &[1.0, 1.0]]);
        for field in [Field::Real, Field::Complex] {
            let s = spec(&[2.0, 1.0]);
            let samples: Vec<_> = (0..20_000)
                .map(|i| sample_mu_s(&s, field, 3, RngHandle::new(8, i)))
                .collect();
            let emp = empirical_cf(&samples, &g).unwrap();
            let th = cf_mu_s(&s, &g, field, 20_000, RngHandle::new(9, 0), &Serial).unwrap();
            for gap in cf_gaps(&emp, &th).unwrap() {
                assert!(gap.standardized() < 4.0, "{field}: {gap:?}");
            }
        }
    }

    #[test]
    fn modulus_bound() {
        let g = CfGrid::default_for_rank(2);
        let s = spec(&[1.5, 0.5]);
        let samples: Vec<_> = (0..500).map(|i| sample_mu_s(&s, Field::Real, 4, RngHandle::new(10, i))).collect();
        let cf = empirical_cf(&samples, &g).unwrap();
        for (v, e) in cf.values.iter().zip(&cf.stderr) {
            assert!(v.norm() <= 1.0 + 3.0 * e + 1e-12);
        }
    }
}
