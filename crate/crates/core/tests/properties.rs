use ergmat_core::eigen::{singular_values, trace_power};
use ergmat_core::matrix::{gram_scaled, gram_schmidt, Matrix};
use ergmat_core::moments::{spectrum_estimate_eigen, spectrum_from_moments};
use ergmat_core::sampling::{gaussian, haar_square, sample_mu_s};
use ergmat_core::{decomposition, CornerMatrix, Field, MomentVector, RngHandle, Scalar, Serial, SpectrumDelta};
use num_complex::Complex64;
use proptest::prelude::*;

fn spectrum(max_rank: usize, max_top: f64) -> impl Strategy<Value = SpectrumDelta> {
    prop::collection::vec(0.0..max_top, 1..=max_rank).prop_map(|v| SpectrumDelta::from_unsorted(v).unwrap())
}

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Real), Just(Field::Complex)]
}

/// tr(M^k) by repeated multiplication.
fn trace_power_naive<T: Scalar>(m: &Matrix<T>, k: u32) -> f64 {
    let mut p = m.clone();
    for _ in 1..k {
        p = p.matmul(m).unwrap();
    }
    (0..m.rows()).map(|i| p[(i, i)].re()).sum()
}

fn equivariance<T: Scalar>(n: usize, seed: u64) -> f64 {
    let rng = RngHandle::new(seed, 11);
    let o: Matrix<T> = haar_square(n, rng.split(0)).unwrap();
    let a: Matrix<T> = gaussian(n, n, rng.split(1));
    let lhs = gram_schmidt(&o.matmul(&a).unwrap()).unwrap();
    let rhs = o.matmul(&gram_schmidt(&a).unwrap()).unwrap();
    lhs.max_abs_diff(&rhs)
}

fn rotated_spectra<T: Scalar>(spec: &SpectrumDelta, n: usize, seed: u64) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>)
where
    CornerMatrix: From<Matrix<T>>,
{
    let rng = RngHandle::new(seed, 12);
    let m = spec.rank();
    let x: Matrix<T> = ergmat_core::sampling::mu_s(spec, n, rng.split(0));
    let u: Matrix<T> = haar_square(n, rng.split(1)).unwrap();
    let v: Matrix<T> = haar_square(m, rng.split(2)).unwrap();
    let y = u.matmul(&x).unwrap().matmul(&v.adjoint()).unwrap();
    let ex = spectrum_estimate_eigen(&CornerMatrix::from(x.clone())).unwrap().spec.into_vec();
    let ey = spectrum_estimate_eigen(&CornerMatrix::from(y.clone())).unwrap().spec.into_vec();
    (ex, ey, singular_values(&x).unwrap(), singular_values(&y).unwrap())
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gram_schmidt_is_equivariant(n in 1usize..40, seed in any::<u64>()) {
        prop_assert!(equivariance::<f64>(n, seed) < 1e-10);
        prop_assert!(equivariance::<Complex64>(n, seed) < 1e-10);
    }

    #[test]
    fn haar_draws_are_orthonormal(n in 1usize..64, seed in any::<u64>()) {
        let o: Matrix<Complex64> = haar_square(n, RngHandle::new(seed, 0)).unwrap();
        prop_assert!(o.unitarity_defect() < 1e-10);
        let o: Matrix<f64> = haar_square(n, RngHandle::new(seed, 0)).unwrap();
        prop_assert!(o.unitarity_defect() < 1e-10);
    }

    #[test]
    fn trace_power_matches_repeated_products(n in 1usize..12, m in 1usize..6, k in 1u32..6, seed in any::<u64>()) {
        let x: Matrix<Complex64> = gaussian(n, m, RngHandle::new(seed, 1));
        let g = gram_scaled(&x);
        let fast = trace_power(&g, k).unwrap();
        let slow = trace_power_naive(&g, k);
        prop_assert!((fast - slow).abs() <= 1e-9 * slow.abs().max(1.0), "{} vs {}", fast, slow);
        let t1 = trace_power(&g, 1).unwrap();
        let tr: f64 = (0..m).map(|i| g[(i, i)].re()).sum();
        prop_assert!((t1 - tr).abs() <= 1e-12 * tr.abs().max(1.0));
    }

    #[test]
    fn spectra_are_bi_invariant(spec in spectrum(5, 4.0), extra in 0usize..20, seed in any::<u64>()) {
        let n = spec.rank() + extra;
        let (ex, ey, sx, sy) = rotated_spectra::<f64>(&spec, n, seed);
        prop_assert!(max_diff(&ex, &ey) < 1e-8);
        prop_assert!(max_diff(&sx, &sy) < 1e-9);
        let (ex, ey, sx, sy) = rotated_spectra::<Complex64>(&spec, n, seed);
        prop_assert!(max_diff(&ex, &ey) < 1e-8);
        prop_assert!(max_diff(&sx, &sy) < 1e-9);
    }

    #[test]
    fn moment_inversion_matches_eigen_route(spec in spectrum(6, 5.0), extra in 0usize..200, f in field(), seed in any::<u64>()) {
        let m = spec.rank();
        let x = sample_mu_s(&spec, f, m + extra, RngHandle::new(seed, 2));
        let eigen = spectrum_estimate_eigen(&x).unwrap().spec;
        let back = spectrum_from_moments(&MomentVector::empirical(&x, m).unwrap(), m).unwrap();
        prop_assert!(eigen.sup_distance(&back).unwrap() < 1e-8, "{:?} vs {:?}", eigen, back);
    }

    #[test]
    fn separated_spectra_invert_from_naive_traces(gaps in prop::collection::vec(0.3f64..2.0, 1..=4), extra in 0usize..100, f in field(), seed in any::<u64>()) {
        // s_i spaced at least 0.3 apart; power sums from repeated Gram products
        let mut acc = 0.2;
        let spec = SpectrumDelta::from_unsorted(gaps.iter().map(|g| { acc += g; acc }).collect()).unwrap();
        let m = spec.rank();
        let x = sample_mu_s(&spec, f, m + 32 + extra, RngHandle::new(seed, 2));
        let g = match &x {
            CornerMatrix::Real(x) => CornerMatrix::from(gram_scaled(x)).to_complex(),
            CornerMatrix::Complex(x) => gram_scaled(x),
        };
        let p: Vec<f64> = (1..=m as u32).map(|k| trace_power_naive(&g, k)).collect();
        let eigen = spectrum_estimate_eigen(&x).unwrap().spec;
        let back = spectrum_from_moments(&MomentVector::from_values(&p).unwrap(), m).unwrap();
        prop_assert!(eigen.sup_distance(&back).unwrap() < 1e-8, "{:?} vs {:?}", eigen, back);
    }

    #[test]
    fn sampling_is_deterministic(spec in spectrum(4, 3.0), n in 1usize..16, f in field(), seed in any::<u64>(), stream in any::<u64>()) {
        let h = RngHandle::new(seed, stream);
        let a = sample_mu_s(&spec, f, n, h);
        let b = sample_mu_s(&spec, f, n, h);
        prop_assert_eq!(a.to_interleaved(), b.to_interleaved());
        let c = sample_mu_s(&spec, f, n, h.split(0));
        prop_assert_ne!(a.to_interleaved(), c.to_interleaved());
    }

    #[test]
    fn decomposition_ignores_order(seed in any::<u64>(), shift in 1usize..40) {
        let rng = RngHandle::new(seed, 3);
        let specs = [SpectrumDelta::new(vec![2.0]).unwrap(), SpectrumDelta::new(vec![0.7]).unwrap()];
        let samples: Vec<CornerMatrix> = (0..60)
            .map(|i| sample_mu_s(&specs[i % 2], Field::Real, 256, rng.split(i as u64)))
            .collect();
        let mut rotated = samples.clone();
        rotated.rotate_left(shift);
        rotated.reverse();
        let a = decomposition::decompose_samples(&samples, 0.2, &Serial).unwrap();
        let b = decomposition::decompose_samples(&rotated, 0.2, &Serial).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn gram_schmidt_stays_orthonormal_at_512() {
    let a: Matrix<f64> = gaussian(512, 512, RngHandle::new(5, 5));
    let q = gram_schmidt(&a).unwrap();
    assert!(q.unitarity_defect() < 1e-10);
}
