//! Ergodic decomposition from samples.
//!
//! Every invariant measure is a mixture `nu = integral mu_s d nubar(s)`, and each
//! `mu_s` is carried by its own set `A_s`. Pushing each sample forward through
//! the consistent estimator `X -> s^(X)` therefore approximates the mixing
//! measure `nubar`; single-linkage clustering of the resulting cloud turns it
//! into weighted atoms.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::exec::{map_indexed, Executor};
use crate::math;
use crate::matrix::CornerMatrix;
use crate::moments::{a_s_distance, spectrum_estimate_eigen, MomentVector};
use crate::spectrum::SpectrumDelta;
use crate::stats;
use crate::{Error, Result};

/// One component of an empirical mixing measure.
#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub spec: SpectrumDelta,
    pub weight: f64,
    /// Number of samples assigned to the atom.
    pub count: usize,
}

/// Weighted atoms on the parameter sector.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalMixture {
    pub m: usize,
    pub atoms: Vec<Atom>,
    pub cluster_tol: f64,
    /// Set when clustering produced more than `sqrt(N)` clusters and the
    /// mixture fell back to the raw estimate cloud with uniform weights.
    pub raw_cloud: bool,
}

impl EmpiricalMixture {
    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }
}

fn lex_desc(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match y.total_cmp(x) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Connected components of the graph joining points at sup-distance `<= tol`.
fn single_linkage(points: &[Vec<f64>], tol: f64) -> Vec<usize> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    let m = points.first().map_or(0, Vec::len);
    let spans_all = (0..m).all(|j| {
        let (lo, hi) = points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[j]), hi.max(p[j])));
        hi - lo <= tol
    });
    if spans_all {
        return vec![0; n];
    }
    // sweep in order of the leading coordinate; only a window of width tol can link
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| points[a][0].total_cmp(&points[b][0]).then(a.cmp(&b)));
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if points[j][0] - points[i][0] > tol {
                break;
            }
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj && sup_dist(&points[i], &points[j]) <= tol {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    (0..n).map(|i| find(&mut parent, i)).collect()
}

/// Per-sample eigen estimates `s^(X_i)`.
pub fn estimate_all<E: Executor + ?Sized>(samples: &[CornerMatrix], exec: &E) -> Result<Vec<SpectrumDelta>> {
    let first = samples.first().ok_or(Error::EmptySampleSet)?;
    let m = first.cols();
    if let Some(x) = samples.iter().find(|x| x.cols() != m) {
        return Err(Error::RankMismatch {
            expected: m,
            found: x.cols(),
        });
    }
    map_indexed(exec, samples.len(), |i| {
        spectrum_estimate_eigen(&samples[i]).map(|e| e.spec)
    })
    .into_iter()
    .collect()
}

/// Default clustering tolerance: five times the `O(s_1 / sqrt(n))` fluctuation
/// scale of the estimator, with `s_1` the median leading estimate.
pub fn default_cluster_tol(estimates: &[SpectrumDelta], n: usize) -> f64 {
    let lead: Vec<f64> = estimates.iter().map(SpectrumDelta::top).collect();
    let scale = stats::median(&lead);
    let tol = 5.0 * scale / math::sqrt(n.max(1) as f64);
    if tol > 0.0 && tol.is_finite() {
        tol
    } else {
        1e-9
    }
}

/// Clusters precomputed estimates into an [`EmpiricalMixture`].
pub fn mixture_from_estimates(estimates: &[SpectrumDelta], cluster_tol: f64) -> Result<EmpiricalMixture> {
    let first = estimates.first().ok_or(Error::EmptySampleSet)?;
    let m = first.rank();
    if let Some(e) = estimates.iter().find(|e| e.rank() != m) {
        return Err(Error::RankMismatch {
            expected: m,
            found: e.rank(),
        });
    }
    if !(cluster_tol >= 0.0) {
        return Err(Error::InvalidParameter("cluster tolerance must be nonnegative".into()));
    }
    let total = estimates.len();
    let points: Vec<Vec<f64>> = estimates.iter().map(|e| e.as_slice().to_vec()).collect();
    let labels = single_linkage(&points, cluster_tol);

    let mut groups: Vec<(usize, Vec<&Vec<f64>>)> = Vec::new();
    let mut slot = vec![usize::MAX; total];
    for (i, &root) in labels.iter().enumerate() {
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push((root, Vec::new()));
        }
        groups[slot[root]].1.push(&points[i]);
    }

    let raw_cloud = (groups.len() as f64) > math::sqrt(total as f64) && groups.len() > 1;
    let mut atoms: Vec<Atom> = if raw_cloud {
        let mut sorted: Vec<&Vec<f64>> = points.iter().collect();
        sorted.sort_by(|a, b| lex_desc(a, b));
        let mut atoms: Vec<Atom> = Vec::new();
        for p in sorted {
            match atoms.last_mut() {
                Some(last) if last.spec.as_slice() == p.as_slice() => last.count += 1,
                _ => atoms.push(Atom {
                    spec: SpectrumDelta::new(p.clone())?,
                    weight: 0.0,
                    count: 1,
                }),
            }
        }
        atoms
    } else {
        groups
            .into_iter()
            .map(|(_, mut members)| {
                // fixed summation order makes the centroid independent of sample order
                members.sort_by(|a, b| lex_desc(a, b));
                let mut centroid = vec![0.0; m];
                for p in &members {
                    for (c, x) in centroid.iter_mut().zip(p.iter()) {
                        *c += x;
                    }
                }
                let k = members.len();
                centroid.iter_mut().for_each(|c| *c /= k as f64);
                Ok(Atom {
                    spec: SpectrumDelta::from_unsorted(centroid)?,
                    weight: 0.0,
                    count: k,
                })
            })
            .collect::<Result<_>>()?
    };
    for a in &mut atoms {
        a.weight = a.count as f64 / total as f64;
    }
    atoms.sort_by(|a, b| {
        b.count
            .cmp(&a.count)
            .then_with(|| lex_desc(a.spec.as_slice(), b.spec.as_slice()))
    });
    Ok(EmpiricalMixture {
        m,
        atoms,
        cluster_tol,
        raw_cloud,
    })
}

/// Estimates the mixing measure of the law the samples were drawn from.
pub fn decompose_samples<E: Executor + ?Sized>(
    samples: &[CornerMatrix],
    cluster_tol: f64,
    exec: &E,
) -> Result<EmpiricalMixture> {
    let estimates = estimate_all(samples, exec)?;
    mixture_from_estimates(&estimates, cluster_tol)
}

/// [`decompose_samples`] with [`default_cluster_tol`].
pub fn decompose_samples_auto<E: Executor + ?Sized>(
    samples: &[CornerMatrix],
    exec: &E,
) -> Result<EmpiricalMixture> {
    let estimates = estimate_all(samples, exec)?;
    let tol = default_cluster_tol(&estimates, samples[0].rows());
    mixture_from_estimates(&estimates, tol)
}

/// Outcome of the held-out classification between two sample sets.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparationReport {
    /// Fraction of held-out samples assigned to their own set (ties count 1/2).
    pub accuracy: f64,
    /// Pooled estimates from the first halves of A and B.
    pub spec_a: SpectrumDelta,
    pub spec_b: SpectrumDelta,
    pub k_max: usize,
    pub classified: usize,
}

fn pooled(estimates: &[SpectrumDelta]) -> Result<SpectrumDelta> {
    let m = estimates[0].rank();
    let mut mean = vec![0.0; m];
    for e in estimates {
        for (acc, x) in mean.iter_mut().zip(e.as_slice()) {
            *acc += x;
        }
    }
    SpectrumDelta::from_unsorted(mean.into_iter().map(|x| x / estimates.len() as f64).collect())
}

/// Classifies held-out samples by which `A_s` shadow they sit closer to.
///
/// Each set is split into its first and second halves. Parameters estimated
/// on one pair of halves classify the other pair and vice versa; the reported
/// spectra are those estimated from the first halves.
pub fn singularity_separation<E: Executor + ?Sized>(
    a: &[CornerMatrix],
    b: &[CornerMatrix],
    k_max: usize,
    exec: &E,
) -> Result<SeparationReport> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::EmptySampleSet);
    }
    if k_max == 0 {
        return Err(Error::InvalidParameter("K must be at least 1".into()));
    }
    if !a[0].same_shape(&b[0]) {
        return Err(Error::ShapeMismatch("both sets must share field and dimensions".into()));
    }
    let est_a = estimate_all(a, exec)?;
    let est_b = estimate_all(b, exec)?;
    let moments = |set: &[CornerMatrix]| -> Result<Vec<MomentVector>> {
        map_indexed(exec, set.len(), |i| MomentVector::empirical(&set[i], k_max))
            .into_iter()
            .collect()
    };
    let (mom_a, mom_b) = (moments(a)?, moments(b)?);
    let (ha, hb) = (a.len() / 2, b.len() / 2);

    let mut score = 0.0;
    let mut classified = 0usize;
    let mut first_specs = None;
    for fold in 0..2 {
        let (fit_a, test_a) = if fold == 0 { (0..ha, ha..a.len()) } else { (ha..a.len(), 0..ha) };
        let (fit_b, test_b) = if fold == 0 { (0..hb, hb..b.len()) } else { (hb..b.len(), 0..hb) };
        let sa = pooled(&est_a[fit_a])?;
        let sb = pooled(&est_b[fit_b])?;
        let vote = |p: &MomentVector, own_is_a: bool| {
            let (da, db) = (a_s_distance(p, &sa), a_s_distance(p, &sb));
            match da.total_cmp(&db) {
                Ordering::Less => f64::from(u8::from(own_is_a)),
                Ordering::Greater => f64::from(u8::from(!own_is_a)),
                Ordering::Equal => 0.5,
            }
        };
        for p in &mom_a[test_a] {
            score += vote(p, true);
            classified += 1;
        }
        for p in &mom_b[test_b] {
            score += vote(p, false);
            classified += 1;
        }
        if fold == 0 {
            first_specs = Some((sa, sb));
        }
    }
    let (spec_a, spec_b) = first_specs.expect("two folds ran");
    Ok(SeparationReport {
        accuracy: score / classified as f64,
        spec_a,
        spec_b,
        k_max,
        classified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Serial;
    use crate::matrix::Matrix;
    use crate::rng::RngHandle;
    use crate::sampling::{sample_mu_s, scaled_frame};
    use crate::scalar::Field;

    fn spec(v: &[f64]) -> SpectrumDelta {
        SpectrumDelta::new(v.to_vec()).unwrap()
    }

    fn draw(s: &SpectrumDelta, n: usize, count: usize, seed: u64) -> Vec<CornerMatrix> {
        let root = RngHandle::from_seed(seed);
        (0..count)
            .map(|i| sample_mu_s(s, Field::Real, n, root.split(i as u64)))
            .collect()
    }

    #[test]
    fn single_measure_gives_one_atom() {
        let s = spec(&[2.0, 1.0]);
        let mix = decompose_samples(&draw(&s, 4096, 500, 1), 0.3, &Serial).unwrap();
        assert_eq!(mix.atoms.len(), 1);
        assert_eq!(mix.atoms[0].weight, 1.0);
        assert!(mix.atoms[0].spec.sup_distance(&s).unwrap() < 0.1);
    }

    #[test]
    fn deterministic_spectra_split_evenly() {
        let q: Matrix<f64> = scaled_frame(16, 2, RngHandle::new(0, 0)).unwrap();
        let samples: Vec<CornerMatrix> = (0..10)
            .map(|i| {
                if i % 2 == 0 {
                    CornerMatrix::zeros(Field::Real, 16, 2)
                } else {
                    CornerMatrix::Real(q.clone())
                }
            })
            .collect();
        let mix = decompose_samples(&samples, 0.1, &Serial).unwrap();
        assert_eq!(mix.atoms.len(), 2);
        assert_eq!(mix.atoms[0].weight, 0.5);
        assert_eq!(mix.atoms[1].weight, 0.5);
        assert!(mix.atoms[0].spec.sup_distance(&SpectrumDelta::ones(2)).unwrap() < 1e-12);
        assert_eq!(mix.atoms[1].spec, SpectrumDelta::zeros(2));
    }

    #[test]
    fn huge_tolerance_merges_everything() {
        let mut samples = draw(&spec(&[2.0]), 64, 50, 2);
        samples.extend(draw(&spec(&[0.5]), 64, 50, 3));
        let mix = decompose_samples(&samples, 1e9, &Serial).unwrap();
        assert_eq!(mix.atoms.len(), 1);
        assert_eq!(mix.atoms[0].weight, 1.0);
    }

    #[test]
    fn tiny_tolerance_falls_back_to_cloud() {
        let samples = draw(&spec(&[1.0]), 32, 100, 4);
        let mix = decompose_samples(&samples, 0.0, &Serial).unwrap();
        assert!(mix.raw_cloud);
        assert!((mix.total_weight() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn permutation_invariance() {
        let mut samples = draw(&spec(&[2.0, 0.0]), 256, 60, 5);
        samples.extend(draw(&spec(&[0.5, 0.0]), 256, 40, 6));
        let a = decompose_samples(&samples, 0.3, &Serial).unwrap();
        samples.reverse();
        samples.swap(3, 71);
        let b = decompose_samples(&samples, 0.3, &Serial).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.atoms.len(), 2);
        assert_eq!(a.atoms[0].count, 60);
    }

    #[test]
    fn errors() {
        assert_eq!(decompose_samples(&[], 0.1, &Serial), Err(Error::EmptySampleSet));
        let mixed = vec![
            CornerMatrix::zeros(Field::Real, 4, 2),
            CornerMatrix::zeros(Field::Real, 4, 3),
        ];
        assert!(matches!(decompose_samples(&mixed, 0.1, &Serial), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn separation_examples() {
        let a = draw(&spec(&[1.0]), 256, 100, 7);
        let zeros = vec![CornerMatrix::zeros(Field::Real, 256, 1); 100];
        let r = singularity_separation(&a, &zeros, 1, &Serial).unwrap();
        assert_eq!(r.accuracy, 1.0);
        assert_eq!(r.classified, 200);

        let pool = draw(&spec(&[1.0]), 256, 400, 8);
        let r = singularity_separation(&pool[..200], &pool[200..], 2, &Serial).unwrap();
        assert!((r.accuracy - 0.5).abs() < 0.1, "{}", r.accuracy);

        assert_eq!(singularity_separation(&a[..1], &zeros, 1, &Serial), Err(Error::EmptySampleSet));
    }
}
