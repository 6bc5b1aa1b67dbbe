//! Finite-squeezing readout noise.
//!
//! A measured quantity is the intended one plus Gaussian noise with the
//! quadrature variance `exp(-2 r) / 2`: `1/2` for an unsqueezed vacuum,
//! vanishing as the squeezing `r` grows. Draws come from ChaCha20 seeded with
//! a `u64`, so a seed reproduces the same stream bit for bit.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    r: f64,
    seed: u64,
}

impl NoiseModel {
    pub fn new(r: f64, seed: u64) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::OutOfRange {
                value: r,
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        Ok(Self { r, seed })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn variance(&self) -> f64 {
        (-2.0 * self.r).exp() / 2.0
    }

    pub fn sampler(&self) -> QuantitySampler {
        QuantitySampler {
            rng: ChaCha20Rng::seed_from_u64(self.seed),
            normal: Normal::new(0.0, self.variance().sqrt())
                .expect("standard deviation is finite and non-negative"),
        }
    }
}

/// Stateful noise source; independent samplers need distinct seeds.
#[derive(Debug, Clone)]
pub struct QuantitySampler {
    rng: ChaCha20Rng,
    normal: Normal<f64>,
}

impl QuantitySampler {
    pub fn measure(&mut self, x_target: f64) -> f64 {
        x_target + self.normal.sample(&mut self.rng)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleStats {
    pub n: usize,
    pub mean: f64,
    /// Unbiased sample variance; zero for a single draw.
    pub variance: f64,
}

impl SampleStats {
    /// Standard error of the variance estimate for Gaussian draws with true
    /// variance `sigma2`.
    pub fn variance_standard_error(&self, sigma2: f64) -> f64 {
        if self.n < 2 {
            return f64::INFINITY;
        }
        sigma2 * (2.0 / (self.n - 1) as f64).sqrt()
    }
}

/// Mean and variance of `n` noisy readouts of `x_target`.
pub fn sample_quantity(x_target: f64, noise: &NoiseModel, n: usize) -> Result<SampleStats> {
    if n == 0 {
        return Err(Error::InvalidConfig("sample count n >= 1"));
    }
    let mut sampler = noise.sampler();
    // Welford's running moments.
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for i in 1..=n {
        let x = sampler.measure(x_target);
        let d = x - mean;
        mean += d / i as f64;
        m2 += d * (x - mean);
    }
    let variance = if n > 1 { m2 / (n - 1) as f64 } else { 0.0 };
    Ok(SampleStats { n, mean, variance })
}
