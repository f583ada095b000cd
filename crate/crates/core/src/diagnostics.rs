//! Statistical verification suites.
//!
//! Each suite reduces a convergence statement to one number compared against
//! a threshold and records every parameter needed to rerun it.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::characteristic::{cf_gaps, cf_mu_s, CfAccumulator, CfEvaluation, CfGrid};
use crate::exec::{map_chunks, Executor};
use crate::math;
use crate::matrix::Matrix;
use crate::rng::RngHandle;
use crate::sampling::{diagonal_block, haar_frame, mu_s, OrbitCorner};
use crate::scalar::{Field, Scalar};
use crate::spectrum::SpectrumDelta;
use crate::stats::{self, correlation, kolmogorov_critical, ks_statistic, normal_cdf, Moments};
use crate::{Error, Result};

/// Significance level of the Kolmogorov-Smirnov test in [`borel_test`].
pub const KS_ALPHA: f64 = 0.01;
/// `c` in the finite-`N` allowance `c / sqrt(N)` of [`borel_test`].
pub const BOREL_BIAS_C: f64 = 1.0;
/// Standard errors of slack in the characteristic-functional comparisons.
pub const CF_SIGMAS: f64 = 3.0;
/// Minimum sample count accepted by [`borel_test`].
pub const BOREL_MIN_SAMPLES: usize = 1000;

/// A value attached to a report.
#[derive(Clone, Debug, PartialEq)]
pub enum Detail {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    List(Vec<f64>),
}

impl From<f64> for Detail {
    fn from(x: f64) -> Self {
        Detail::Num(x)
    }
}

impl From<usize> for Detail {
    fn from(x: usize) -> Self {
        Detail::Int(x as i64)
    }
}

impl From<u64> for Detail {
    fn from(x: u64) -> Self {
        Detail::Int(x as i64)
    }
}

impl From<bool> for Detail {
    fn from(x: bool) -> Self {
        Detail::Bool(x)
    }
}

impl From<&str> for Detail {
    fn from(x: &str) -> Self {
        Detail::Text(x.to_string())
    }
}

impl From<String> for Detail {
    fn from(x: String) -> Self {
        Detail::Text(x)
    }
}

impl From<Vec<f64>> for Detail {
    fn from(x: Vec<f64>) -> Self {
        Detail::List(x)
    }
}

/// Outcome of one suite: `passed` iff `statistic <= threshold`.
#[derive(Clone, Debug, PartialEq)]
pub struct TestReport {
    pub name: String,
    pub statistic: f64,
    pub threshold: f64,
    pub passed: bool,
    pub details: Vec<(String, Detail)>,
}

impl TestReport {
    pub fn new(name: &str, statistic: f64, threshold: f64) -> Self {
        TestReport {
            name: name.to_string(),
            statistic,
            threshold,
            passed: statistic <= threshold,
            details: vec![("direction".into(), "pass iff statistic <= threshold".into())],
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Detail>) -> Self {
        self.details.push((key.to_string(), value.into()));
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Detail>) {
        self.details.push((key.to_string(), value.into()));
    }

    pub fn detail(&self, key: &str) -> Option<&Detail> {
        self.details.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// Numeric detail, if present.
    pub fn number(&self, key: &str) -> Option<f64> {
        match self.detail(key)? {
            Detail::Num(x) => Some(*x),
            Detail::Int(i) => Some(*i as f64),
            _ => None,
        }
    }

    fn seeded(self, rng: RngHandle) -> Self {
        self.with("seed", rng.seed).with("stream", rng.stream)
    }
}

/// Checks that `sqrt(N)` times the upper-left `S x S` corner of a Haar matrix
/// on `O(N)` / `U(N)` is close in law to a standard Gaussian matrix.
///
/// The statistic is the larger of `D / (K_alpha / sqrt(count) + c / sqrt(N))`
/// (Kolmogorov-Smirnov distance of the pooled entries against `N(0, 1)`) and
/// `max |corr| / (3 / sqrt(num_samples))` over pairs of entry series; the
/// threshold is 1. Complex entries contribute their real and imaginary parts,
/// rescaled by `sqrt(2)`, as two separately tested pools. With `N = S` no
/// Gaussian limit is in play and the allowance `c / sqrt(N)` is not granted.
pub fn borel_test<E: Executor + ?Sized>(
    big_n: usize,
    s: usize,
    num_samples: usize,
    field: Field,
    rng: RngHandle,
    exec: &E,
) -> Result<TestReport> {
    if s == 0 || big_n == 0 {
        return Err(Error::InvalidParameter("N and S must be positive".into()));
    }
    if s > big_n {
        return Err(Error::OutOfRange {
            requested: s,
            available: big_n,
        });
    }
    if num_samples < BOREL_MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "borel test needs at least {BOREL_MIN_SAMPLES} samples"
        )));
    }
    let series = match field {
        Field::Real => borel_series::<f64, E>(big_n, s, num_samples, rng, exec)?,
        Field::Complex => borel_series::<Complex64, E>(big_n, s, num_samples, rng, exec)?,
    };

    // pools: all real parts, and for complex fields all imaginary parts
    let per_pool = s * s;
    let pools: Vec<Vec<f64>> = series
        .chunks(per_pool)
        .map(|group| group.iter().flatten().copied().collect())
        .collect();
    let mut ks = Vec::new();
    let mut variance = Moments::new();
    for pool in &pools {
        pool.iter().for_each(|&x| variance.push(x));
        let mut p = pool.clone();
        ks.push(ks_statistic(&mut p, normal_cdf));
    }
    let d = ks.iter().copied().fold(0.0, f64::max);
    let count = pools[0].len();
    let critical = kolmogorov_critical(KS_ALPHA) / math::sqrt(count as f64);
    let degenerate = big_n == s;
    let allowance = if degenerate { 0.0 } else { BOREL_BIAS_C / math::sqrt(big_n as f64) };
    let ks_threshold = critical + allowance;

    let mut max_corr = 0.0f64;
    for a in 0..series.len() {
        for b in a + 1..series.len() {
            max_corr = max_corr.max(correlation(&series[a], &series[b]).abs());
        }
    }
    let corr_bound = 3.0 / math::sqrt(num_samples as f64);
    let statistic = (d / ks_threshold).max(max_corr / corr_bound);

    let mut report = TestReport::new("borel", statistic, 1.0)
        .with("N", big_n)
        .with("S", s)
        .with("samples", num_samples)
        .with("field", field.as_str())
        .with("ks_statistic", d)
        .with("ks_per_part", ks.clone())
        .with("ks_alpha", KS_ALPHA)
        .with("ks_critical", critical)
        .with("bias_allowance_c", BOREL_BIAS_C)
        .with("bias_allowance", allowance)
        .with("ks_threshold", ks_threshold)
        .with("pooled_count", count)
        .with("entry_variance", variance.variance())
        .with("max_correlation", max_corr)
        .with("correlation_bound", corr_bound)
        .seeded(rng);
    if degenerate {
        report.push(
            "note",
            "N = S: the corner is the whole Haar matrix, whose scaled entries have no Gaussian limit",
        );
    }
    Ok(report)
}

/// Per-entry series of `sqrt(N) Z_ij` over samples: `S^2` real-part series,
/// followed for complex fields by `S^2` imaginary-part series (both scaled to unit variance).
fn borel_series<T: Scalar, E: Executor + ?Sized>(
    big_n: usize,
    s: usize,
    num_samples: usize,
    rng: RngHandle,
    exec: &E,
) -> Result<Vec<Vec<f64>>> {
    let parts = T::EMBED;
    let root_n = math::sqrt(big_n as f64);
    let unit = if parts == 2 { math::sqrt(2.0) } else { 1.0 };
    let chunks = map_chunks(exec, num_samples, |range| -> Result<Vec<Vec<f64>>> {
        let mut local = vec![Vec::with_capacity(range.len()); parts * s * s];
        for i in range {
            let frame: Matrix<T> = haar_frame(big_n, s, rng.split(i as u64))?;
            for r in 0..s {
                for c in 0..s {
                    let z = frame[(r, c)];
                    local[r * s + c].push(z.re() * root_n * unit);
                    if parts == 2 {
                        local[s * s + r * s + c].push(z.im() * root_n * unit);
                    }
                }
            }
        }
        Ok(local)
    });
    let mut series = vec![Vec::with_capacity(num_samples); parts * s * s];
    for chunk in chunks {
        for (all, part) in series.iter_mut().zip(chunk?) {
            all.extend(part);
        }
    }
    Ok(series)
}

fn check_unitary<T: Scalar>(u: &Matrix<T>, dim: usize, what: &str) -> Result<()> {
    if u.rows() != dim || u.cols() != dim {
        return Err(Error::ShapeMismatch(format!(
            "{what} must be {dim}x{dim}, got {}x{}",
            u.rows(),
            u.cols()
        )));
    }
    let deviation = u.unitarity_defect();
    if !(deviation <= 1e-10) {
        return Err(Error::NotOrthogonal { deviation });
    }
    Ok(())
}

/// Compares the empirical characteristic functionals of `X_i ~ mu_s` and of
/// `u X_i v^-1`. The statistic is `max_lambda |gap| / stderr`, threshold 3.
#[allow(clippy::too_many_arguments)]
pub fn invariance_test<T: Scalar, E: Executor + ?Sized>(
    spec: &SpectrumDelta,
    n: usize,
    u: &Matrix<T>,
    v: &Matrix<T>,
    num_samples: usize,
    grid: &CfGrid,
    rng: RngHandle,
    exec: &E,
) -> Result<TestReport> {
    let m = spec.rank();
    if n < m {
        return Err(Error::OutOfRange {
            requested: m,
            available: n,
        });
    }
    if grid.rank() != m {
        return Err(Error::RankMismatch {
            expected: m,
            found: grid.rank(),
        });
    }
    if num_samples == 0 {
        return Err(Error::EmptySampleSet);
    }
    check_unitary(u, n, "u")?;
    check_unitary(v, m, "v")?;
    // only the top m rows of u ever reach the diagonal of the m x m corner
    let u_top = u.top_rows(m)?;
    let parts = map_chunks(exec, num_samples, |range| {
        let mut plain = CfAccumulator::new(grid.len());
        let mut moved = CfAccumulator::new(grid.len());
        let mut diag = vec![0.0; m];
        for i in range {
            let x: Matrix<T> = mu_s(spec, n, rng.split(i as u64));
            plain.observe_diagonal(grid, &x.diagonal_re()[..m]);
            let ux = u_top.matmul(&x).expect("conformable");
            for (l, d) in diag.iter_mut().enumerate() {
                let mut acc = T::zero();
                for b in 0..m {
                    acc += ux[(l, b)] * v[(l, b)].conj();
                }
                *d = acc.re();
            }
            moved.observe_diagonal(grid, &diag);
        }
        (plain, moved)
    });
    let mut plain = CfAccumulator::new(grid.len());
    let mut moved = CfAccumulator::new(grid.len());
    for (a, b) in &parts {
        plain.merge(a);
        moved.merge(b);
    }
    let (a, b) = (plain.finish(grid), moved.finish(grid));
    let gaps = cf_gaps(&a, &b)?;
    let statistic = gaps.iter().map(|g| g.standardized()).fold(0.0, f64::max);
    let sup = gaps.iter().map(|g| g.gap).fold(0.0, f64::max);
    Ok(TestReport::new("invariance", statistic, CF_SIGMAS)
        .with("s", spec.as_slice().to_vec())
        .with("n", n)
        .with("field", T::FIELD.as_str())
        .with("samples", num_samples)
        .with("grid_points", grid.len())
        .with("sup_distance", sup)
        .with("u_defect", u.unitarity_defect())
        .with("v_defect", v.unitarity_defect())
        .seeded(rng))
}

/// Orbital bias allowance `b(n) = m / (2n)`.
pub fn orbital_bias_allowance(m: usize, n: usize) -> f64 {
    m as f64 / (2.0 * n as f64)
}

/// Empirical characteristic functional of orbital corners of the block
/// `sqrt(n) W D_s` (W the first m columns of the identity).
pub fn orbital_cf<E: Executor + ?Sized>(
    spec: &SpectrumDelta,
    n: usize,
    num_samples: usize,
    grid: &CfGrid,
    field: Field,
    rng: RngHandle,
    exec: &E,
) -> Result<CfEvaluation> {
    match field {
        Field::Real => orbital_cf_field::<f64, E>(spec, n, num_samples, grid, rng, exec),
        Field::Complex => orbital_cf_field::<Complex64, E>(spec, n, num_samples, grid, rng, exec),
    }
}

fn orbital_cf_field<T: Scalar, E: Executor + ?Sized>(
    spec: &SpectrumDelta,
    n: usize,
    num_samples: usize,
    grid: &CfGrid,
    rng: RngHandle,
    exec: &E,
) -> Result<CfEvaluation> {
    let m = spec.rank();
    if n < m {
        return Err(Error::OutOfRange {
            requested: m,
            available: n,
        });
    }
    if num_samples == 0 {
        return Err(Error::EmptySampleSet);
    }
    let orbit = OrbitCorner::new(&diagonal_block::<T>(spec, n))?;
    let parts = map_chunks(exec, num_samples, |range| -> Result<CfAccumulator> {
        let mut acc = CfAccumulator::new(grid.len());
        for i in range {
            let y = orbit.sample(m, rng.split(i as u64))?;
            acc.observe_diagonal(grid, &y.diagonal_re());
        }
        Ok(acc)
    });
    let mut total = CfAccumulator::new(grid.len());
    for p in parts {
        total.merge(&p?);
    }
    Ok(total.finish(grid))
}

/// Compares orbital samples at resolution `n` with `mu_s`. The statistic is
/// `max_lambda (|gap| - 3 stderr)`, the threshold `b(n) = m / (2n)`.
pub fn orbital_convergence_test<E: Executor + ?Sized>(
    spec: &SpectrumDelta,
    n: usize,
    num_samples: usize,
    grid: &CfGrid,
    field: Field,
    rng: RngHandle,
    exec: &E,
) -> Result<TestReport> {
    let m = spec.rank();
    if grid.rank() != m {
        return Err(Error::RankMismatch {
            expected: m,
            found: grid.rank(),
        });
    }
    let empirical = orbital_cf(spec, n, num_samples, grid, field, rng.split(0), exec)?;
    let reference = cf_mu_s(spec, grid, field, num_samples, rng.split(1), exec)?;
    let gaps = cf_gaps(&empirical, &reference)?;
    let statistic = gaps
        .iter()
        .map(|g| g.gap - CF_SIGMAS * g.stderr)
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0);
    let sup = gaps.iter().map(|g| g.gap).fold(0.0, f64::max);
    let allowance = orbital_bias_allowance(m, n);
    let mut report = TestReport::new("orbital", statistic, allowance)
        .with("s", spec.as_slice().to_vec())
        .with("n", n)
        .with("field", field.as_str())
        .with("samples", num_samples)
        .with("grid_points", grid.len())
        .with("sup_distance", sup)
        .with("sigmas", CF_SIGMAS)
        .with("bias_allowance", allowance)
        .with("bias_allowance_rule", "m / (2n)")
        .seeded(rng);
    if statistic > allowance {
        report.push(
            "note",
            "small-n regime: the orbital corner law is still far from mu_s at this resolution",
        );
    }
    Ok(report)
}

/// `x` with `P(max of count i.i.d. |g| <= x) = q` for standard Gaussians of the field.
fn max_abs_gaussian_quantile(count: usize, q: f64, field: Field) -> f64 {
    // per-entry exceedance probability 1 - q^(1/count)
    let tail = -libm::expm1(math::ln(q) / count as f64);
    match field {
        Field::Real => -stats::normal_quantile(tail / 2.0),
        Field::Complex => math::sqrt(-math::ln(tail)),
    }
}

/// Finite-scale shadow of the tightness criterion.
///
/// For each spectrum the 0.99-quantile `q_j` of `max |X_ab|` is estimated. The
/// statistic is `max_j q_j / max_j s_1^(j)` and the threshold is twice the
/// 0.99-quantile of the maximum modulus of `n m` standard Gaussians, so the
/// suite passes when the quantiles are controlled by the leading parameter.
/// When the quantiles scale linearly with `s_1` across a sequence whose
/// leading parameter grows by a factor of 10 or more, the report flags escape
/// to infinity.
pub fn tightness_diagnostic<E: Executor + ?Sized>(
    specs: &[SpectrumDelta],
    n: usize,
    num_samples: usize,
    field: Field,
    rng: RngHandle,
    exec: &E,
) -> Result<TestReport> {
    let m = specs.first().ok_or(Error::EmptySampleSet)?.rank();
    if let Some(s) = specs.iter().find(|s| s.rank() != m) {
        return Err(Error::RankMismatch {
            expected: m,
            found: s.rank(),
        });
    }
    if num_samples == 0 || n == 0 {
        return Err(Error::InvalidParameter("need n >= 1 and at least one sample".into()));
    }
    let mut quantiles = Vec::with_capacity(specs.len());
    for (j, spec) in specs.iter().enumerate() {
        let stream = rng.split(j as u64);
        let maxima: Vec<f64> = map_chunks(exec, num_samples, |range| {
            range
                .map(|i| match field {
                    Field::Real => mu_s::<f64>(spec, n, stream.split(i as u64)).max_abs(),
                    Field::Complex => mu_s::<Complex64>(spec, n, stream.split(i as u64)).max_abs(),
                })
                .collect::<Vec<_>>()
        })
        .into_iter()
        .flatten()
        .collect();
        quantiles.push(stats::quantile(&maxima, 0.99));
    }
    let tops: Vec<f64> = specs.iter().map(SpectrumDelta::top).collect();
    let sup_top = tops.iter().copied().fold(0.0, f64::max);
    let sup_q = quantiles.iter().copied().fold(0.0, f64::max);
    let statistic = if sup_top > 0.0 { sup_q / sup_top } else { sup_q };
    let reference = max_abs_gaussian_quantile(n * m, 0.99, field);

    let ratios: Vec<f64> = quantiles
        .iter()
        .zip(&tops)
        .filter(|(_, &t)| t > 0.0)
        .map(|(q, t)| q / t)
        .collect();
    let (rmin, rmax) = ratios
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &r| (lo.min(r), hi.max(r)));
    let linear = !ratios.is_empty() && rmax <= 2.0 * rmin;
    let positive_tops: Vec<f64> = tops.iter().copied().filter(|&t| t > 0.0).collect();
    let min_top = positive_tops.iter().copied().fold(f64::INFINITY, f64::min);
    let escape = linear && positive_tops.len() > 1 && sup_top >= 10.0 * min_top;

    Ok(TestReport::new("tightness", statistic, 2.0 * reference)
        .with("n", n)
        .with("m", m)
        .with("field", field.as_str())
        .with("samples", num_samples)
        .with("s1", tops)
        .with("quantile_level", 0.99)
        .with("quantiles", quantiles)
        .with("quantile_over_s1", ratios)
        .with("gaussian_reference", reference)
        .with("linear_in_s1", linear)
        .with("escape_to_infinity", escape)
        .seeded(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Serial;
    use crate::sampling::haar_square;

    fn spec(v: &[f64]) -> SpectrumDelta {
        SpectrumDelta::new(v.to_vec()).unwrap()
    }

    #[test]
    fn borel_degenerate_case_fails() {
        let r = borel_test(1, 1, 1000, Field::Real, RngHandle::new(1, 0), &Serial).unwrap();
        assert!(!r.passed);
        assert!(r.detail("note").is_some());
        assert!((r.number("entry_variance").unwrap() - 1.0).abs() < 1e-2);
    }

    #[test]
    fn borel_preconditions() {
        assert!(matches!(
            borel_test(2, 3, 1000, Field::Real, RngHandle::new(0, 0), &Serial),
            Err(Error::OutOfRange { .. })
        ));
        assert!(borel_test(10, 1, 10, Field::Real, RngHandle::new(0, 0), &Serial).is_err());
    }

    #[test]
    fn borel_moderate_dimension_passes() {
        for field in [Field::Real, Field::Complex] {
            let r = borel_test(200, 2, 5000, field, RngHandle::new(2, 0), &Serial).unwrap();
            assert!(r.passed, "{r:?}");
            assert!((r.number("entry_variance").unwrap() - 1.0).abs() < 0.05);
        }
    }

    #[test]
    fn borel_is_deterministic() {
        let a = borel_test(30, 2, 1000, Field::Complex, RngHandle::new(3, 3), &Serial).unwrap();
        let b = borel_test(30, 2, 1000, Field::Complex, RngHandle::new(3, 3), &Serial).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn invariance_identity_is_exact() {
        let s = spec(&[2.0, 1.0]);
        let u = Matrix::<f64>::identity(8);
        let v = Matrix::<f64>::identity(2);
        let g = CfGrid::default_for_rank(2);
        let r = invariance_test(&s, 8, &u, &v, 500, &g, RngHandle::new(4, 0), &Serial).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.number("sup_distance"), Some(0.0));
    }

    #[test]
    fn invariance_sign_flip_and_rejection() {
        let s = spec(&[2.0, 1.0]);
        let n = 64;
        let mut u = Matrix::<f64>::identity(n);
        u[(0, 0)] = -1.0;
        let v = Matrix::<f64>::identity(2);
        let g = CfGrid::default_for_rank(2);
        let r = invariance_test(&s, n, &u, &v, 10_000, &g, RngHandle::new(5, 0), &Serial).unwrap();
        assert!(r.passed, "{r:?}");

        let bad = Matrix::<f64>::identity(n).scaled(2.0);
        assert!(matches!(
            invariance_test(&s, n, &bad, &v, 10, &g, RngHandle::new(5, 0), &Serial),
            Err(Error::NotOrthogonal { .. })
        ));
    }

    #[test]
    fn invariance_complex_random_pair() {
        let s = spec(&[2.0, 1.0]);
        let n = 16;
        let u: Matrix<Complex64> = haar_square(n, RngHandle::new(6, 1)).unwrap();
        let v: Matrix<Complex64> = haar_square(2, RngHandle::new(6, 2)).unwrap();
        let g = CfGrid::default_for_rank(2);
        let r = invariance_test(&s, n, &u, &v, 5000, &g, RngHandle::new(6, 0), &Serial).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn orbital_zero_orbit() {
        let g = CfGrid::default_for_rank(2);
        let r = orbital_convergence_test(&SpectrumDelta::zeros(2), 8, 200, &g, Field::Real, RngHandle::new(7, 0), &Serial).unwrap();
        assert_eq!(r.number("sup_distance"), Some(0.0));
        assert!(r.passed);
    }

    #[test]
    fn orbital_small_and_large_n() {
        let g = CfGrid::new(vec![spec(&[0.5]), spec(&[1.0]), spec(&[2.0])]).unwrap();
        let s = spec(&[1.0]);
        let big = orbital_convergence_test(&s, 1024, 10_000, &g, Field::Real, RngHandle::new(8, 0), &Serial).unwrap();
        assert!(big.passed, "{big:?}");
        let small = orbital_convergence_test(&s, 4, 10_000, &g, Field::Real, RngHandle::new(8, 0), &Serial).unwrap();
        assert!(!small.passed, "{small:?}");
        assert!(small.detail("note").is_some());
    }

    #[test]
    fn tightness_examples() {
        let ones = vec![SpectrumDelta::ones(2); 3];
        let r = tightness_diagnostic(&ones, 16, 300, Field::Real, RngHandle::new(9, 0), &Serial).unwrap();
        assert!(r.passed);

        let growing: Vec<_> = [1.0, 10.0, 100.0].iter().map(|&x| spec(&[x])).collect();
        let r = tightness_diagnostic(&growing, 16, 300, Field::Real, RngHandle::new(9, 1), &Serial).unwrap();
        assert_eq!(r.detail("linear_in_s1"), Some(&Detail::Bool(true)));
        assert_eq!(r.detail("escape_to_infinity"), Some(&Detail::Bool(true)));

        let zeros = vec![SpectrumDelta::zeros(2); 2];
        let r = tightness_diagnostic(&zeros, 8, 50, Field::Complex, RngHandle::new(9, 2), &Serial).unwrap();
        assert_eq!(r.detail("quantiles"), Some(&Detail::List(vec![0.0, 0.0])));
        assert_eq!(r.statistic, 0.0);
    }

    #[test]
    fn gaussian_max_reference() {
        // one real entry: the 0.99 quantile of |g| is the 0.995 normal quantile
        assert!((max_abs_gaussian_quantile(1, 0.99, Field::Real) - 2.5758293).abs() < 1e-6);
        // one complex entry: P(|g| <= x) = 1 - exp(-x^2)
        let x = max_abs_gaussian_quantile(1, 0.99, Field::Complex);
        assert!((1.0 - (-x * x).exp() - 0.99).abs() < 1e-12);
    }
}
