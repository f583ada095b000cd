//! Splittable, counter-based random streams.
//!
//! A [`RngHandle`] is a `(seed, stream)` pair. It owns no state: every consumer
//! builds a fresh ChaCha8 generator keyed by `seed` on nonce `stream`, so the
//! same handle always reproduces the same numbers. Independent sub-streams come
//! from [`RngHandle::split`], which is how Monte Carlo loops hand one stream to
//! each sample regardless of how the work is scheduled.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rand_distr::{Distribution, Gamma};

use crate::math;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RngHandle {
    pub seed: u64,
    pub stream: u64,
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RngHandle {
    pub const fn new(seed: u64, stream: u64) -> Self {
        RngHandle { seed, stream }
    }

    /// Root handle for a run seed.
    pub const fn from_seed(seed: u64) -> Self {
        RngHandle { seed, stream: 0 }
    }

    /// Child handle number `index`. Children of distinct indices (and of
    /// distinct parents) land on unrelated ChaCha nonces.
    pub fn split(self, index: u64) -> RngHandle {
        let salt = mix64(index.wrapping_add(1).wrapping_mul(GOLDEN));
        RngHandle {
            seed: self.seed,
            stream: mix64(self.stream ^ salt).wrapping_add(GOLDEN),
        }
    }

    /// Fresh generator positioned at the start of this stream.
    pub fn normals(self) -> Normals {
        let mut key = [0u8; 32];
        for (i, chunk) in key.chunks_exact_mut(8).enumerate() {
            let word = mix64(self.seed.wrapping_add((i as u64 + 1).wrapping_mul(GOLDEN)));
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(self.stream);
        Normals { rng, spare: None }
    }
}

/// Uniform, Gaussian and gamma variates from one ChaCha stream.
pub struct Normals {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl Normals {
    /// Uniform on `[0, 1)` with 53 random bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1]`.
    #[inline]
    fn uniform_open0(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal by the Box-Muller transform; variates come in pairs and
    /// the second is cached.
    #[inline]
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform_open0();
        let u2 = self.uniform();
        let r = math::sqrt(-2.0 * math::ln(u1));
        let (s, c) = math::sin_cos(core::f64::consts::TAU * u2);
        self.spare = Some(r * s);
        r * c
    }

    /// `+1` or `-1` with equal probability.
    #[inline]
    pub fn sign(&mut self) -> f64 {
        if self.rng.next_u64() >> 63 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Gamma variate with the given shape and unit scale.
    pub fn gamma(&mut self, shape: f64) -> f64 {
        Gamma::new(shape, 1.0)
            .expect("gamma shape must be positive and finite")
            .sample(&mut self.rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn same_handle_same_numbers() {
        let h = RngHandle::new(42, 7);
        let a: Vec<f64> = {
            let mut g = h.normals();
            (0..100).map(|_| g.normal()).collect()
        };
        let b: Vec<f64> = {
            let mut g = h.normals();
            (0..100).map(|_| g.normal()).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn split_streams_differ() {
        let root = RngHandle::from_seed(1);
        let mut seen = std::collections::HashSet::new();
        for i in 0..10_000 {
            assert!(seen.insert(root.split(i).stream));
        }
        let x = root.split(0).normals().normal();
        let y = root.split(1).normals().normal();
        assert_ne!(x, y);
        assert_ne!(RngHandle::new(1, 0).normals().uniform(), RngHandle::new(2, 0).normals().uniform());
    }

    #[test]
    fn normal_moments() {
        let mut g = RngHandle::new(3, 3).normals();
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| g.normal()).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn split_streams_are_uncorrelated() {
        let root = RngHandle::from_seed(9);
        let n = 50_000;
        let mut a = root.split(0).normals();
        let mut b = root.split(1).normals();
        let dot: f64 = (0..n).map(|_| a.normal() * b.normal()).sum();
        assert!((dot / n as f64).abs() < 4.0 / (n as f64).sqrt());
    }

    #[test]
    fn gamma_mean() {
        let mut g = RngHandle::new(5, 1).normals();
        let n = 50_000;
        let mean = (0..n).map(|_| g.gamma(3.5)).sum::<f64>() / n as f64;
        assert!((mean - 3.5).abs() < 0.05);
    }
}
