//! Points of the parameter sector `s_1 >= s_2 >= ... >= s_m >= 0`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::{Error, Result};

/// A descending nonnegative `m`-tuple; indexes the ergodic measure `mu_s`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumDelta {
    s: Vec<f64>,
}

impl SpectrumDelta {
    /// Strict constructor: rejects empty, non-finite, negative or non-descending input.
    pub fn new(s: Vec<f64>) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::InvalidSpectrum("rank must be at least 1".into()));
        }
        if let Some(x) = s.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidSpectrum(format!("non-finite entry {x}")));
        }
        if let Some(x) = s.iter().find(|&&x| x < 0.0) {
            return Err(Error::InvalidSpectrum(format!("negative entry {x}")));
        }
        if let Some(i) = s.windows(2).position(|w| w[0] < w[1]) {
            return Err(Error::InvalidSpectrum(format!(
                "entries must satisfy s_1 >= ... >= s_m >= 0, but s_{} = {} < s_{} = {}",
                i + 1,
                s[i],
                i + 2,
                s[i + 1]
            )));
        }
        Ok(SpectrumDelta { s })
    }

    /// Sorts into descending order first; still rejects negative or non-finite entries.
    pub fn from_unsorted(mut s: Vec<f64>) -> Result<Self> {
        s.sort_by(|a, b| b.total_cmp(a));
        Self::new(s)
    }

    pub fn zeros(m: usize) -> Self {
        SpectrumDelta { s: vec![0.0; m] }
    }

    pub fn ones(m: usize) -> Self {
        SpectrumDelta { s: vec![1.0; m] }
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.s.len()
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.s
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.s
    }

    /// Largest entry `s_1`.
    pub fn top(&self) -> f64 {
        self.s[0]
    }

    /// `sum_i s_i^(2k)`.
    pub fn power_sum(&self, k: u32) -> f64 {
        self.s.iter().map(|&x| math::powi(x * x, k)).sum()
    }

    /// `max_i |s_i - t_i|`; `None` when ranks differ.
    pub fn sup_distance(&self, other: &SpectrumDelta) -> Option<f64> {
        (self.rank() == other.rank()).then(|| {
            self.s
                .iter()
                .zip(&other.s)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
    }
}
