//! Reproducible random streams.
//!
//! Each stream is a ChaCha20 keystream keyed by `seed` and positioned on
//! `stream_id`, so parallel work units draw from disjoint, reproducible
//! sequences regardless of scheduling.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};

/// Tolerance on the total of a categorical distribution.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha20Rng,
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self { seed, stream_id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// A fresh stream with the same seed on another stream id.
    pub fn fork(&self, stream_id: u64) -> Self {
        Self::new(self.seed, stream_id)
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Exponential waiting time with the given rate.
    pub fn exponential(&mut self, rate: f64) -> Result<f64> {
        let bad = || Error::Domain(format!("exponential rate must be positive and finite, got {rate}"));
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(bad());
        }
        let dist = Exp::new(rate).map_err(|_| bad())?;
        Ok(dist.sample(&mut self.rng))
    }

    pub fn bernoulli(&mut self, p: f64) -> Result<bool> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
        }
        Ok(self.uniform() < p)
    }

    /// Index drawn with the given probabilities, which must sum to one.
    pub fn categorical(&mut self, probabilities: &[f64]) -> Result<usize> {
        if probabilities.is_empty() {
            return Err(Error::Empty("categorical distribution"));
        }
        if probabilities.iter().any(|&p| !(p >= -PROBABILITY_SUM_TOLERANCE)) {
            return Err(Error::Domain("negative probability".into()));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
            return Err(Error::Normalization(total));
        }
        let u = self.uniform() * total;
        let mut acc = 0.0;
        for (k, &p) in probabilities.iter().enumerate() {
            acc += p.max(0.0);
            if u < acc {
                return Ok(k);
            }
        }
        Ok(probabilities.iter().rposition(|&p| p > 0.0).unwrap_or(probabilities.len() - 1))
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    #[test]
    fn same_key_same_sequence() {
        let mut a = RandomStream::new(42, 3);
        let mut b = RandomStream::new(42, 3);
        for _ in 0..1000 {
            assert_eq!(a.uniform().to_bits(), b.uniform().to_bits());
        }
    }

    #[test]
    fn streams_differ() {
        let mut a = RandomStream::new(42, 0);
        let mut b = RandomStream::new(42, 1);
        let same = (0..100).filter(|_| a.next_u64() == b.next_u64()).count();
        assert_eq!(same, 0);
    }

    #[test]
    fn independent_streams_pass_chi_square() {
        let bins = 10;
        let draws = 100_000;
        let mut a = RandomStream::new(9, 0);
        let mut b = RandomStream::new(9, 1);
        let mut counts = vec![0.0; bins * bins];
        for _ in 0..draws {
            let i = (a.uniform() * bins as f64) as usize;
            let j = (b.uniform() * bins as f64) as usize;
            counts[i * bins + j] += 1.0;
        }
        let rows: Vec<f64> = (0..bins).map(|i| (0..bins).map(|j| counts[i * bins + j]).sum()).collect();
        let cols: Vec<f64> = (0..bins).map(|j| (0..bins).map(|i| counts[i * bins + j]).sum()).collect();
        let n = draws as f64;
        let mut chi2 = 0.0;
        for i in 0..bins {
            for j in 0..bins {
                let expected = rows[i] * cols[j] / n;
                chi2 += (counts[i * bins + j] - expected).powi(2) / expected;
            }
        }
        let dof = ((bins - 1) * (bins - 1)) as f64;
        let p = 1.0 - ChiSquared::new(dof).unwrap().cdf(chi2);
        assert!(p > 0.001, "chi2 = {chi2}, p = {p}");
    }

    #[test]
    fn exponential_mean() {
        let mut r = RandomStream::new(1, 0);
        let n = 100_000;
        let mean: f64 = (0..n).map(|_| r.exponential(2.0).unwrap()).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 3.0 * 0.5 / (n as f64).sqrt());
    }

    #[test]
    fn categorical_checks() {
        let mut r = RandomStream::new(5, 0);
        assert!(matches!(r.categorical(&[0.5, 0.4]), Err(Error::Normalization(_))));
        assert!(r.categorical(&[]).is_err());
        assert_eq!(r.categorical(&[0.0, 1.0, 0.0]).unwrap(), 1);
        assert!(r.bernoulli(1.5).is_err());
        assert!(r.exponential(0.0).is_err());
    }
}
