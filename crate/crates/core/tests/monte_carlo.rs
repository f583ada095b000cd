use ergmat_core::characteristic::{cf_gaps, cf_mu_s, empirical_cf};
use ergmat_core::decomposition::decompose_samples_auto;
use ergmat_core::diagnostics::borel_test;
use ergmat_core::moments::spectrum_estimate_eigen;
use ergmat_core::sampling::{gaussian_matrix, sample_mu_s};
use ergmat_core::stats::median;
use ergmat_core::{CfGrid, CornerMatrix, Field, RngHandle, Serial, SpectrumDelta};

fn spec(v: &[f64]) -> SpectrumDelta {
    SpectrumDelta::new(v.to_vec()).unwrap()
}

#[test]
fn unit_spectrum_is_the_gaussian_ensemble() {
    let grid = CfGrid::default_for_rank(2);
    for field in [Field::Real, Field::Complex] {
        let rng = RngHandle::new(1, field as u64);
        let a: Vec<CornerMatrix> = (0..20_000).map(|i| sample_mu_s(&SpectrumDelta::ones(2), field, 8, rng.split(i))).collect();
        let b: Vec<CornerMatrix> = (0..20_000).map(|i| gaussian_matrix(8, 2, field, rng.split(1 << 40 | i))).collect();
        let gaps = cf_gaps(&empirical_cf(&a, &grid).unwrap(), &empirical_cf(&b, &grid).unwrap()).unwrap();
        let worst = gaps.iter().map(|g| g.standardized()).fold(0.0, f64::max);
        assert!(worst < 3.5, "{field:?}: {worst}");
    }
}

#[test]
fn estimation_error_shrinks_like_inverse_root_n() {
    let s = spec(&[2.0, 1.0, 0.5]);
    let err = |n: usize| {
        let e: Vec<f64> = (0..200)
            .map(|i| {
                let x = sample_mu_s(&s, Field::Real, n, RngHandle::new(2, n as u64).split(i));
                spectrum_estimate_eigen(&x).unwrap().spec.sup_distance(&s).unwrap()
            })
            .collect();
        median(&e)
    };
    let (coarse, fine) = (err(1024), err(4096));
    assert!(fine <= 0.7 * coarse, "{fine} vs {coarse}");
}

#[test]
fn mixture_weights_track_proportions() {
    let (a, b) = (spec(&[2.0, 0.0]), spec(&[0.5, 0.0]));
    for w in [0.3, 0.5] {
        let total = 1000;
        let first = (w * total as f64) as u64;
        let rng = RngHandle::new(3, first);
        let samples: Vec<CornerMatrix> = (0..total as u64)
            .map(|i| sample_mu_s(if i < first { &a } else { &b }, Field::Real, 1024, rng.split(i)))
            .collect();
        let mix = decompose_samples_auto(&samples, &Serial).unwrap();
        assert_eq!(mix.atoms.len(), 2);
        let big = mix.atoms.iter().find(|x| x.spec.top() > 1.0).unwrap();
        assert!((big.weight - w).abs() < 1e-12, "{}", big.weight);
    }
}

#[test]
fn functional_separates_distinct_spectra() {
    // lambda grid with spacing 0.25 on the sorted part of [0, 4]^2
    let mut points = Vec::new();
    for i in 0..=16 {
        for j in 0..=i {
            points.push(spec(&[i as f64 * 0.25, j as f64 * 0.25]));
        }
    }
    let grid = CfGrid::new(points).unwrap();
    let pairs = [([1.0, 0.5], [1.2, 0.5]), ([3.0, 1.0], [2.8, 0.8]), ([0.5, 0.5], [0.5, 0.3])];
    for (k, (x, y)) in pairs.iter().enumerate() {
        let rng = RngHandle::new(4, k as u64);
        let a = cf_mu_s(&spec(x), &grid, Field::Real, 100_000, rng.split(0), &Serial).unwrap();
        let b = cf_mu_s(&spec(y), &grid, Field::Real, 100_000, rng.split(1), &Serial).unwrap();
        let gaps = cf_gaps(&a, &b).unwrap();
        let best = gaps.iter().max_by(|p, q| p.gap.total_cmp(&q.gap)).unwrap();
        assert!(best.gap >= 5.0 * best.stderr, "{x:?} vs {y:?}: {best:?}");
    }
}

#[test]
fn borel_bias_is_visible_at_small_n() {
    let ks = |n: usize| {
        borel_test(n, 3, 20_000, Field::Real, RngHandle::new(5, 0), &Serial)
            .unwrap()
            .number("ks_statistic")
            .unwrap()
    };
    assert!(ks(5) > ks(50));
}
