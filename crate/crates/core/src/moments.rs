//! Trace moments of corners and recovery of the spectral parameter `s`.
//!
//! For `X ~ mu_s` the scaled Gram power sums `tr[(C_n(X)^* C_n(X) / n)^k]`
//! converge almost surely to `p_k = sum_i s_i^(2k)`. The first `m` power sums
//! determine the multiset `{s_i^2}`; [`spectrum_from_moments`] inverts them with
//! Newton's identities and a polynomial root finder, and
//! [`spectrum_estimate_eigen`] reads `s` directly off the Gram spectrum.

use alloc::format;
use alloc::vec::Vec;

use crate::dd::Dd;
use crate::eigen::{scaled_gram_spectrum, trace_power};
use crate::math;
use crate::matrix::{dispatch, gram_scaled, CornerMatrix};
use crate::poly::{aberth, companion_roots};
use crate::spectrum::SpectrumDelta;
use crate::{Error, Result};

const ROOT_TOL: f64 = 1e-6;
const POLISH_ITERATIONS: usize = 200;

/// Power sums `p_1, ..., p_K`, carried in double-double precision.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentVector {
    p: Vec<Dd>,
}

impl MomentVector {
    /// From plain values; each must be finite and nonnegative.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("at least one moment is required".into()));
        }
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if let Some(x) = values.iter().find(|&&x| x < 0.0) {
            return Err(Error::InconsistentMoments(format!("negative power sum {x}")));
        }
        Ok(MomentVector {
            p: values.iter().map(|&x| Dd::new(x)).collect(),
        })
    }

    /// From values carried as unevaluated sums `hi + lo`, for power sums
    /// computed in more than double precision.
    pub fn from_parts(parts: &[(f64, f64)]) -> Result<Self> {
        let hi: Vec<f64> = parts.iter().map(|p| p.0).collect();
        Self::from_values(&hi)?;
        if parts.iter().any(|p| !p.1.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(MomentVector {
            p: parts.iter().map(|&(hi, lo)| Dd::from_parts(hi, lo)).collect(),
        })
    }

    /// Power sums `sum_i s_i^(2k)` for `k = 1..=k_max`, evaluated in double-double.
    pub fn exact(spec: &SpectrumDelta, k_max: usize) -> Self {
        let squares: Vec<Dd> = spec
            .as_slice()
            .iter()
            .map(|&s| Dd::new(s) * Dd::new(s))
            .collect();
        MomentVector {
            p: (1..=k_max as u32).map(|k| power_sum(&squares, k)).collect(),
        }
    }

    /// Empirical power sums `p^_k = tr[(X^* X / n)^k]`, `k = 1..=k_max`.
    pub fn empirical(xn: &CornerMatrix, k_max: usize) -> Result<Self> {
        let eig = dispatch!(xn, x => scaled_gram_spectrum(x))?;
        let eig: Vec<Dd> = eig.into_iter().map(Dd::new).collect();
        Ok(MomentVector {
            p: (1..=k_max as u32).map(|k| power_sum(&eig, k)).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// `p_k` for `1 <= k <= len()`.
    pub fn get(&self, k: usize) -> f64 {
        self.p[k - 1].to_f64()
    }

    pub fn values(&self) -> Vec<f64> {
        self.p.iter().map(|x| x.to_f64()).collect()
    }

    /// Checks the log-convexity chain `p_(k+1) p_(k-1) >= p_k^2` that every exact
    /// power-sum sequence of nonnegative reals satisfies.
    pub fn is_log_convex(&self, rel_tol: f64) -> bool {
        self.p.windows(3).all(|w| {
            let lhs = (w[2] * w[0]).to_f64();
            let rhs = (w[1] * w[1]).to_f64();
            lhs >= rhs - rel_tol * rhs.abs()
        })
    }
}

fn power_sum(values: &[Dd], k: u32) -> Dd {
    values.iter().fold(Dd::ZERO, |acc, &x| acc + x.powi(k))
}

/// `p^_k = tr[(X^* X / n)^k]`.
pub fn empirical_moment(xn: &CornerMatrix, k: u32) -> Result<f64> {
    dispatch!(xn, x => trace_power(&gram_scaled(x), k))
}

/// The unique `s` in the parameter sector whose squares have power sums `p_1..p_m`.
pub fn spectrum_from_moments(p: &MomentVector, m: usize) -> Result<SpectrumDelta> {
    if m == 0 {
        return Err(Error::InvalidParameter("rank must be at least 1".into()));
    }
    if p.len() != m {
        return Err(Error::RankMismatch {
            expected: m,
            found: p.len(),
        });
    }
    let scale = p.p[0];
    let c = scale.to_f64();
    if c == 0.0 {
        if p.p.iter().any(|x| x.to_f64() != 0.0) {
            return Err(Error::InconsistentMoments(
                "p_1 = 0 forces every higher power sum to vanish".into(),
            ));
        }
        return Ok(SpectrumDelta::zeros(m));
    }

    // Newton's identities on the normalized sums q_k = p_k / p_1^k, whose
    // roots t_i / p_1 all lie in [0, 1].
    let mut q = Vec::with_capacity(m);
    let mut ck = Dd::ONE;
    for k in 0..m {
        ck = ck * scale;
        q.push(p.p[k] / ck);
    }
    let mut e = Vec::with_capacity(m + 1);
    e.push(Dd::ONE);
    for k in 1..=m {
        let mut acc = Dd::ZERO;
        for i in 1..=k {
            let term = e[k - i] * q[i - 1];
            acc = if i % 2 == 1 { acc + term } else { acc - term };
        }
        e.push(acc / k as f64);
    }
    // monic t^m - e_1 t^(m-1) + e_2 t^(m-2) - ...
    let coeffs: Vec<Dd> = (1..=m)
        .map(|k| if k % 2 == 1 { -e[k] } else { e[k] })
        .collect();
    let coarse = companion_roots(&coeffs.iter().map(|x| x.to_f64()).collect::<Vec<_>>())?;

    let roots = aberth(&coeffs, &coarse, POLISH_ITERATIONS);

    let tol = ROOT_TOL * c.max(1.0) / c;
    for z in &roots {
        let (re, im) = (z.re.to_f64(), z.im.to_f64());
        if im.abs() > tol || re < -tol {
            return Err(Error::InconsistentMoments(format!(
                "power sums are not those of {m} nonnegative squares (root {:.3e}{:+.3e}i)",
                re * c,
                im * c
            )));
        }
    }
    let s: Vec<f64> = roots
        .iter()
        .map(|z| {
            let t = if z.re.to_f64() < 0.0 { Dd::ZERO } else { z.re };
            (t * scale).sqrt().to_f64()
        })
        .collect();
    SpectrumDelta::from_unsorted(s)
}

/// Which route produced an estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EstimateMethod {
    Eigen,
    Moments,
}

impl EstimateMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimateMethod::Eigen => "eigen",
            EstimateMethod::Moments => "moments",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "eigen" => Some(EstimateMethod::Eigen),
            "moments" => Some(EstimateMethod::Moments),
            _ => None,
        }
    }
}

/// An estimate `s^` of the spectral parameter from one corner.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumEstimate {
    pub spec: SpectrumDelta,
    /// Number of rows of the corner the estimate was read from.
    pub n: usize,
    pub method: EstimateMethod,
    /// `max_k |p^_k - p_k(s^)| / max(1, p^_k)` over `k <= m`; `+inf` when `n < m`.
    pub residual: f64,
}

fn residual(p: &MomentVector, spec: &SpectrumDelta, n: usize) -> f64 {
    if n < spec.rank() {
        return f64::INFINITY;
    }
    let fit = MomentVector::exact(spec, p.len());
    p.p.iter()
        .zip(&fit.p)
        .map(|(a, b)| (*a - *b).abs().to_f64() / a.to_f64().max(1.0))
        .fold(0.0, f64::max)
}

/// `s^_i = sqrt(eig_i(X^* X / n))`. Rank-deficient corners (`n < m`) give
/// trailing zeros and an infinite residual.
pub fn spectrum_estimate_eigen(xn: &CornerMatrix) -> Result<SpectrumEstimate> {
    let eig = dispatch!(xn, x => scaled_gram_spectrum(x))?;
    let n = xn.rows();
    let spec = SpectrumDelta::from_unsorted(eig.iter().map(|&x| math::sqrt(x)).collect())?;
    let p = MomentVector {
        p: (1..=eig.len() as u32)
            .map(|k| power_sum(&eig.iter().map(|&x| Dd::new(x)).collect::<Vec<_>>(), k))
            .collect(),
    };
    Ok(SpectrumEstimate {
        residual: residual(&p, &spec, n),
        spec,
        n,
        method: EstimateMethod::Eigen,
    })
}

/// Inverts the first `m` empirical power sums.
pub fn spectrum_estimate_moments(xn: &CornerMatrix) -> Result<SpectrumEstimate> {
    let m = xn.cols();
    let n = xn.rows();
    let p = MomentVector::empirical(xn, m)?;
    let spec = spectrum_from_moments(&p, m)?;
    Ok(SpectrumEstimate {
        residual: residual(&p, &spec, n),
        spec,
        n,
        method: EstimateMethod::Moments,
    })
}

/// Dispatches on `method`.
pub fn estimate(xn: &CornerMatrix, method: EstimateMethod) -> Result<SpectrumEstimate> {
    match method {
        EstimateMethod::Eigen => spectrum_estimate_eigen(xn),
        EstimateMethod::Moments => spectrum_estimate_moments(xn),
    }
}

/// `max_(1<=k<=K) |p^_k(X) - sum_i s_i^(2k)|`, the distance of `X` from the
/// finite-`n` shadow of the set `A_s`.
pub fn a_s_statistic(xn: &CornerMatrix, spec: &SpectrumDelta, k_max: usize) -> Result<f64> {
    if k_max == 0 {
        return Err(Error::InvalidParameter("K must be at least 1".into()));
    }
    if spec.rank() != xn.cols() {
        return Err(Error::RankMismatch {
            expected: xn.cols(),
            found: spec.rank(),
        });
    }
    let observed = MomentVector::empirical(xn, k_max)?;
    Ok(a_s_distance(&observed, spec))
}

/// [`a_s_statistic`] from precomputed empirical power sums.
pub fn a_s_distance(observed: &MomentVector, spec: &SpectrumDelta) -> f64 {
    let target = MomentVector::exact(spec, observed.len());
    observed
        .p
        .iter()
        .zip(&target.p)
        .map(|(a, b)| (*a - *b).abs().to_f64())
        .fold(0.0, f64::max)
}
