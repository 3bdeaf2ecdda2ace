use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Smallest sample count accepted by [`Estimate::from_moments`].
pub const MIN_SAMPLES: u64 = 30;

/// Running mean and centred sum of squares (Welford), mergeable.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Accumulator {
    pub n: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Accumulator {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&self, other: &Self) -> Self {
        if self.n == 0 {
            return *other;
        }
        if other.n == 0 {
            return *self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let w = other.n as f64 / n as f64;
        Self {
            n,
            mean: self.mean + d * w,
            m2: self.m2 + other.m2 + d * d * self.n as f64 * w,
        }
    }
}

/// Merge in a fixed binary tree over the input order.
pub(crate) fn pairwise_merge(parts: &[Accumulator]) -> Accumulator {
    match parts.len() {
        0 => Accumulator::default(),
        1 => parts[0],
        n => {
            let (l, r) = parts.split_at(n / 2);
            pairwise_merge(l).merge(&pairwise_merge(r))
        }
    }
}

/// Monte Carlo mean with a normal-approximation 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    pub n: u64,
    pub seed: u64,
}

impl Estimate {
    /// From sample count, mean and centred sum of squares.
    pub fn from_moments(n: u64, mean: f64, m2: f64, seed: u64) -> Result<Self> {
        if n < MIN_SAMPLES {
            return Err(Error::param(
                "n_samples",
                format!("{n} samples; at least {MIN_SAMPLES} are needed for an interval"),
            ));
        }
        if !(mean.is_finite() && m2.is_finite()) {
            return Err(Error::domain("estimate", "non-finite sample moments"));
        }
        let var = (m2 / (n - 1) as f64).max(0.0);
        let stderr = (var / n as f64).sqrt();
        Ok(Self {
            mean,
            stderr,
            ci95_low: mean - Z95 * stderr,
            ci95_high: mean + Z95 * stderr,
            n,
            seed,
        })
    }

    pub fn from_samples(xs: &[f64], seed: u64) -> Result<Self> {
        let mut acc = Accumulator::default();
        xs.iter().for_each(|&x| acc.push(x));
        Self::from_moments(acc.n, acc.mean, acc.m2, seed)
    }

    pub(crate) fn from_accumulator(acc: &Accumulator, seed: u64) -> Result<Self> {
        Self::from_moments(acc.n, acc.mean, acc.m2, seed)
    }

    pub fn covers(&self, value: f64) -> bool {
        self.ci95_low <= value && value <= self.ci95_high
    }

    /// `|mean - value| ≤ k·stderr`
    pub fn within_stderrs(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.stderr
    }
}

/// Kolmogorov–Smirnov distance between a sample and a distribution function.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter().enumerate().fold(0.0, |d: f64, (i, &x)| {
        let f = cdf(x);
        d.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
    })
}

/// KS rejection threshold `c(α)/√n` for the asymptotic Kolmogorov law.
pub fn ks_critical_value(n: usize, confidence: f64) -> f64 {
    let alpha = 1.0 - confidence;
    (-0.5 * (alpha / 2.0).ln()).sqrt() / (n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.3).collect();
        let mut all = Accumulator::default();
        xs.iter().for_each(|&x| all.push(x));
        let parts: Vec<Accumulator> = xs
            .chunks(77)
            .map(|c| {
                let mut a = Accumulator::default();
                c.iter().for_each(|&x| a.push(x));
                a
            })
            .collect();
        let merged = pairwise_merge(&parts);
        assert_eq!(merged.n, all.n);
        assert_relative_eq!(merged.mean, all.mean, max_relative = 1e-13);
        assert_relative_eq!(merged.m2, all.m2, max_relative = 1e-12);
    }

    #[test]
    fn estimate_rules() {
        assert!(Estimate::from_samples(&[1.0; 29], 0).is_err());
        let e = Estimate::from_samples(&[2.0; 30], 0).unwrap();
        assert_eq!((e.mean, e.stderr), (2.0, 0.0));
        assert!(e.ci95_low <= e.mean && e.mean <= e.ci95_high);
    }

    #[test]
    fn ks_of_exact_quantiles_is_small() {
        let n = 1000;
        let xs: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        assert_relative_eq!(
            ks_statistic(&xs, |x| x),
            0.5 / n as f64,
            max_relative = 1e-9
        );
        assert_relative_eq!(ks_critical_value(100, 0.99), 0.16276, max_relative = 1e-3);
    }
}
