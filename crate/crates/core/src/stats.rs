use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: usize,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { mean: value, std_error: 0.0, n: 1 }
    }

    /// Mean and `stddev / sqrt(n)` of the samples, accumulated in order.
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len();
        assert!(n > 0, "estimate needs at least one sample");
        let mean = samples.iter().sum::<f64>() / n as f64;
        if n == 1 {
            return Estimate { mean, std_error: 0.0, n };
        }
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        Estimate { mean, std_error: (var / n as f64).sqrt(), n }
    }

    /// True when the estimate is positive beyond `z` standard errors.
    pub fn significantly_positive(&self, z: f64) -> bool {
        self.mean > 0.0 && self.mean - z * self.std_error > 0.0
    }
}

/// One-sided standard normal critical value `z` with `P(Z > z) = alpha`.
pub fn z_one_sided(alpha: f64) -> f64 {
    assert!(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
    Normal::standard().inverse_cdf(1.0 - alpha)
}
