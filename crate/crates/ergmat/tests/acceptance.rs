//! Acceptance battery: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use ergmat::parallel::{available_threads, Exec};
use ergmat_core::battery;
use ergmat_core::characteristic::cf_mu_s;
use ergmat_core::matrix::{gram_scaled, gram_schmidt, Matrix};
use ergmat_core::moments::{spectrum_estimate_eigen, spectrum_from_moments};
use ergmat_core::sampling::{gaussian, sample_mu_s};
use ergmat_core::{CfGrid, Complex64, CornerMatrix, Field, MomentVector, RngHandle, Scalar, SpectrumDelta, TestReport};

const SEED: u64 = 0;

struct Line {
    id: usize,
    name: &'static str,
    passed: bool,
    summary: String,
}

/// Runs `body`, requiring its own checks to pass and the wall time to stay under `limit`.
fn criterion(
    id: usize,
    name: &'static str,
    limit: Duration,
    body: impl FnOnce() -> Result<String, String>,
) -> Line {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let (ok, msg) = match outcome {
        Ok(m) => (true, m),
        Err(m) => (false, m),
    };
    let passed = ok && in_time;
    let summary = format!(
        "{msg}; {:.1}s (limit {}s){}",
        elapsed.as_secs_f64(),
        limit.as_secs(),
        if in_time { "" } else { " TOO SLOW" }
    );
    println!("criterion {id:>2} {name:<24} {} {summary}", if passed { "PASS" } else { "FAIL" });
    Line { id, name, passed, summary }
}

fn report_outcome(r: &TestReport) -> Result<String, String> {
    let msg = format!("statistic {:.4e} vs threshold {:.4e}", r.statistic, r.threshold);
    if r.passed {
        Ok(msg)
    } else {
        Err(format!("{msg}; details {:?}", r.details))
    }
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

/// Modified Gram-Schmidt written out directly, normalized to a positive real `R` diagonal.
fn mgs_oracle<T: Scalar>(a: &Matrix<T>) -> Matrix<T> {
    let n = a.rows();
    let mut cols: Vec<Vec<T>> = (0..n).map(|j| a.column(j)).collect();
    for j in 0..n {
        for i in 0..j {
            let (done, rest) = cols.split_at_mut(j);
            let q = &done[i];
            let mut dot = T::zero();
            for r in 0..n {
                dot += q[r].conj() * rest[0][r];
            }
            for r in 0..n {
                let qr = q[r];
                rest[0][r] -= qr * dot;
            }
        }
        let norm = cols[j].iter().map(|x| x.abs_sq()).sum::<f64>().sqrt();
        for x in cols[j].iter_mut() {
            *x = x.unscale(norm);
        }
    }
    Matrix::from_fn(n, n, |r, c| cols[c][r])
}

/// `sum_i s_i^(2k)` as `hi + lo`, via error-free products and sums.
fn exact_power_sum(s: &[f64], k: u32) -> (f64, f64) {
    let two_sum = |a: f64, b: f64| {
        let x = a + b;
        let z = x - a;
        (x, (a - (x - z)) + (b - z))
    };
    let mul = |(ah, al): (f64, f64), (bh, bl): (f64, f64)| {
        let p = ah * bh;
        let e = ah.mul_add(bh, -p) + (ah * bl + al * bh);
        two_sum(p, e)
    };
    let mut acc = (0.0, 0.0);
    for &x in s {
        let sq = mul((x, 0.0), (x, 0.0));
        let mut term = (1.0, 0.0);
        for _ in 0..k {
            term = mul(term, sq);
        }
        let (hi, lo) = two_sum(acc.0, term.0);
        acc = two_sum(hi, lo + acc.1 + term.1);
    }
    acc
}

fn trace_power_naive(g: &Matrix<Complex64>, k: u32) -> f64 {
    let mut p = g.clone();
    for _ in 1..k {
        p = p.matmul(g).unwrap();
    }
    (0..g.rows()).map(|i| p[(i, i)].re).sum()
}

fn spec(v: &[f64]) -> SpectrumDelta {
    SpectrumDelta::new(v.to_vec()).unwrap()
}

fn main() -> ExitCode {
    let threads = available_threads();
    let exec = Exec::with_threads(threads).expect("thread pool");
    println!("acceptance battery, seed {SEED}, {threads} thread(s)");
    let secs = Duration::from_secs;
    let mut lines = Vec::new();

    lines.push(criterion(1, "haar_equivariance", secs(10), || {
        for (k, n) in [4usize, 32, 128].into_iter().enumerate() {
            let a: Matrix<f64> = gaussian(n, n, RngHandle::new(SEED, 100 + k as u64));
            let d = gram_schmidt(&a).unwrap().max_abs_diff(&mgs_oracle(&a));
            ensure(d < 1e-10, || format!("gram_schmidt differs from direct MGS by {d:e} at N = {n}"))?;
            let c: Matrix<Complex64> = gaussian(n, n, RngHandle::new(SEED, 200 + k as u64));
            let d = gram_schmidt(&c).unwrap().max_abs_diff(&mgs_oracle(&c));
            ensure(d < 1e-10, || format!("complex gram_schmidt differs from direct MGS by {d:e} at N = {n}"))?;
        }
        report_outcome(&battery::haar_equivariance(SEED, &exec).map_err(|e| e.to_string())?)
    }));

    lines.push(criterion(2, "borel_truncation", secs(120), || {
        let r = battery::borel_truncation(SEED, &exec).map_err(|e| e.to_string())?;
        // asymptotic Kolmogorov quantile: sqrt(ln(2 / alpha) / 2) at alpha = 0.01
        let expected = ((2.0f64 / 0.01).ln() / 2.0).sqrt() / 1e5f64.sqrt() + 1.0 / 1000f64.sqrt();
        let got = r.number("ks_threshold").unwrap_or(f64::NAN);
        ensure((got - expected).abs() < 1e-4, || format!("KS threshold {got} vs {expected}"))?;
        for key in ["real_ks", "complex_ks"] {
            let d = r.number(key).unwrap_or(f64::NAN);
            ensure(d < expected, || format!("{key} = {d} not below {expected}"))?;
        }
        report_outcome(&r)
    }));

    lines.push(criterion(3, "moment_limits", secs(60), || {
        let r = battery::moment_limits(SEED, &exec).map_err(|e| e.to_string())?;
        let s = [2.0f64, 1.0, 0.5];
        let targets: Vec<f64> = (1..=3).map(|k| s.iter().map(|x| x.powi(2 * k)).sum()).collect();
        ensure(targets[0] == 5.25, || "p_1 target".into())?;
        match r.detail("targets") {
            Some(ergmat_core::Detail::List(t)) => ensure(t == &targets, || format!("targets {t:?}"))?,
            other => return Err(format!("missing targets: {other:?}")),
        }
        report_outcome(&r)
    }));

    lines.push(criterion(4, "moment_roundtrip", secs(5), || {
        // independent draw of 1000 points of the sector; power sums computed here
        // to ~106 bits (rounding them to f64 alone moves s by up to ~1e-4 at m = 8)
        let mut worst = 0.0f64;
        for i in 0..1000u64 {
            let mut src = RngHandle::new(SEED, 4000 + i).normals();
            let m = 1 + (i % 8) as usize;
            let s = SpectrumDelta::from_unsorted((0..m).map(|_| 10.0 * src.uniform()).collect()).unwrap();
            let p: Vec<(f64, f64)> = (1..=m as u32).map(|k| exact_power_sum(s.as_slice(), k)).collect();
            let back = spectrum_from_moments(&MomentVector::from_parts(&p).unwrap(), m).map_err(|e| e.to_string())?;
            worst = worst.max(back.sup_distance(&s).unwrap());
        }
        ensure(worst < 1e-7, || format!("oracle round trip error {worst:e}"))?;
        report_outcome(&battery::moment_roundtrip(SEED, &exec).map_err(|e| e.to_string())?)
    }));

    lines.push(criterion(5, "estimator_consistency", secs(60), || {
        // power sums by repeated Gram products, independent of the eigensolver
        let s = spec(&[2.0, 1.0, 0.5]);
        let mut worst = 0.0f64;
        for i in 0..200u64 {
            let x = sample_mu_s(&s, Field::Real, 4096, RngHandle::new(SEED, 5000 + i));
            let CornerMatrix::Real(xr) = &x else { unreachable!() };
            let g = CornerMatrix::from(gram_scaled(xr)).to_complex();
            let p: Vec<f64> = (1..=3).map(|k| trace_power_naive(&g, k)).collect();
            let via_traces = spectrum_from_moments(&MomentVector::from_values(&p).unwrap(), 3).map_err(|e| e.to_string())?;
            let eig = spectrum_estimate_eigen(&x).map_err(|e| e.to_string())?.spec;
            worst = worst.max(eig.sup_distance(&via_traces).unwrap());
        }
        ensure(worst < 1e-8, || format!("trace-oracle disagreement {worst:e}"))?;
        report_outcome(&battery::estimator_consistency(SEED, &exec).map_err(|e| e.to_string())?)
    }));

    lines.push(criterion(6, "mutual_singularity", secs(60), || {
        report_outcome(&battery::mutual_singularity(SEED, &exec).map_err(|e| e.to_string())?)
    }));

    lines.push(criterion(7, "cf_consistency", secs(180), || {
        let lambdas = [0.0, 0.3, 1.0, 1.7, 2.5];
        let grid = CfGrid::new(lambdas.iter().map(|&l| spec(&[l])).collect()).unwrap();
        for s1 in [0.2, 1.0, 2.4] {
            let cf = cf_mu_s(&spec(&[s1]), &grid, Field::Real, 1, RngHandle::new(SEED, 7), &exec).map_err(|e| e.to_string())?;
            for (v, l) in cf.values.iter().zip(lambdas) {
                let exact = (-l * l * s1 * s1 / 2.0).exp();
                ensure((v.re - exact).abs() < 1e-12 && v.im == 0.0, || format!("cf at s = {s1}, lambda = {l}: {v} vs {exact}"))?;
            }
        }
        report_outcome(&battery::cf_consistency(SEED, &exec).map_err(|e| e.to_string())?)
    }));

    lines.push(criterion(8, "decomposition_recovery", secs(120), || {
        report_outcome(&battery::decomposition_recovery(SEED, &exec).map_err(|e| e.to_string())?)
    }));

    lines.push(criterion(9, "orbital_convergence", secs(300), || {
        let r = battery::orbital_convergence(SEED, &exec).map_err(|e| e.to_string())?;
        ensure(r.detail("monotone") == Some(&ergmat_core::Detail::Bool(true)), || format!("{:?}", r.details))?;
        report_outcome(&r).map(|m| format!("{m}; median sup distances {:?}", r.detail("median_sup_distance").unwrap()))
    }));

    lines.push(criterion(10, "bi_invariance", secs(180), || {
        report_outcome(&battery::bi_invariance(SEED, &exec).map_err(|e| e.to_string())?)
    }));

    lines.push(criterion(11, "reproducibility", secs(900), || {
        let run = || {
            let out = Command::new(env!("CARGO_BIN_EXE_ergmat"))
                .args(["verify", "all", "--seed", "0"])
                .output()
                .map_err(|e| e.to_string())?;
            Ok::<_, String>((out.status.code(), out.stdout))
        };
        let (code_a, a) = run()?;
        let (code_b, b) = run()?;
        ensure(!a.is_empty() && a == b, || "verify all outputs differ between runs".into())?;
        ensure(code_a == code_b, || format!("exit codes {code_a:?} vs {code_b:?}"))?;
        let doc: serde_json::Value = serde_json::from_slice(&a).map_err(|e| e.to_string())?;
        let vector: Vec<bool> = doc["result"]["reports"]
            .as_array()
            .ok_or("no reports")?
            .iter()
            .map(|r| r["passed"].as_bool().unwrap_or(false))
            .collect();
        ensure(code_a == Some(0), || format!("verify all exited {code_a:?}, pass vector {vector:?}"))?;
        Ok(format!("{} identical bytes, pass vector {vector:?}", a.len()))
    }));

    let failed: Vec<&Line> = lines.iter().filter(|l| !l.passed).collect();
    println!("{} of {} criteria passed", lines.len() - failed.len(), lines.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        for l in failed {
            println!("failed: {} {} ({})", l.id, l.name, l.summary);
        }
        ExitCode::FAILURE
    }
}
