use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Law of one exogenous noise term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum NoiseSpec {
    Gaussian { mean: f64, stddev: f64 },
    Uniform { lo: f64, hi: f64 },
    Rademacher,
    PointMass { value: f64 },
}

impl NoiseSpec {
    pub fn standard_normal() -> Self {
        NoiseSpec::Gaussian { mean: 0.0, stddev: 1.0 }
    }

    pub fn is_well_formed(&self) -> bool {
        match *self {
            NoiseSpec::Gaussian { mean, stddev } => mean.is_finite() && stddev.is_finite() && stddev > 0.0,
            NoiseSpec::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && lo < hi,
            NoiseSpec::Rademacher => true,
            NoiseSpec::PointMass { value } => value.is_finite(),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            NoiseSpec::Gaussian { mean, .. } => mean,
            NoiseSpec::Uniform { lo, hi } => 0.5 * (lo + hi),
            NoiseSpec::Rademacher => 0.0,
            NoiseSpec::PointMass { value } => value,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            NoiseSpec::Gaussian { stddev, .. } => stddev * stddev,
            NoiseSpec::Uniform { lo, hi } => (hi - lo).powi(2) / 12.0,
            NoiseSpec::Rademacher => 1.0,
            NoiseSpec::PointMass { .. } => 0.0,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, NoiseSpec::PointMass { .. })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            NoiseSpec::Gaussian { mean, stddev } => {
                let z: f64 = StandardNormal.sample(rng);
                mean + stddev * z
            }
            NoiseSpec::Uniform { lo, hi } => rng.random_range(lo..hi),
            NoiseSpec::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            NoiseSpec::PointMass { value } => value,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn well_formedness() {
        assert!(NoiseSpec::standard_normal().is_well_formed());
        assert!(!NoiseSpec::Gaussian { mean: 0.0, stddev: 0.0 }.is_well_formed());
        assert!(!NoiseSpec::Uniform { lo: 1.0, hi: 1.0 }.is_well_formed());
        assert!(NoiseSpec::Uniform { lo: -1.0, hi: 1.0 }.is_well_formed());
    }

    #[test]
    fn json_shape() {
        let n: NoiseSpec = serde_json::from_str(r#"{"law":"gaussian","mean":0,"stddev":2}"#).unwrap();
        assert_eq!(n, NoiseSpec::Gaussian { mean: 0.0, stddev: 2.0 });
        let r: NoiseSpec = serde_json::from_str(r#"{"law":"rademacher"}"#).unwrap();
        assert_eq!(r, NoiseSpec::Rademacher);
    }
}
