use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A reference map `h` read by an [`Classifier::indicator_match`] rule.
pub trait ReferenceMap: Send + Sync + fmt::Debug {
    /// Target value for feature vector `x`.
    fn value(&self, x: &[f64]) -> Result<f64>;
    /// Feature positions the map reads.
    fn reads(&self) -> Vec<usize>;
}

/// Piecewise-constant score over a grid of feature values. Out-of-grid
/// inputs are clamped to the boundary cells.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreGrid {
    pub features: Vec<usize>,
    pub lo: Vec<f64>,
    pub step: Vec<f64>,
    pub counts: Vec<usize>,
    pub values: Vec<f64>,
}

impl ScoreGrid {
    fn lookup(&self, x: &[f64]) -> f64 {
        let mut flat = 0usize;
        for (d, &f) in self.features.iter().enumerate() {
            let n = self.counts[d];
            let k = ((x[f] - self.lo[d]) / self.step[d]).floor().clamp(0.0, (n - 1) as f64) as usize;
            flat = flat * n + k;
        }
        self.values[flat]
    }
}

#[derive(Debug, Clone)]
pub enum ClassifierKind {
    /// `offset + sum(w * x[feature])`
    LinearScore { weights: Vec<(usize, f64)>, offset: f64 },
    /// `1{|x[axis] - h(x)| <= tolerance}`
    IndicatorMatch { axis: usize, reference: Arc<dyn ReferenceMap>, tolerance: f64 },
    Constant(f64),
    Grid(ScoreGrid),
}

/// A decision rule `f(x)`, optionally clamped to `[0, bound]`.
#[derive(Debug, Clone)]
pub struct Classifier {
    pub kind: ClassifierKind,
    pub output_bound: Option<f64>,
}

impl Classifier {
    pub fn linear(weights: impl IntoIterator<Item = (usize, f64)>, offset: f64) -> Self {
        let mut weights: Vec<(usize, f64)> = weights.into_iter().collect();
        weights.sort_by_key(|&(i, _)| i);
        Classifier { kind: ClassifierKind::LinearScore { weights, offset }, output_bound: None }
    }

    pub fn constant(v: f64) -> Self {
        Classifier { kind: ClassifierKind::Constant(v), output_bound: None }
    }

    pub fn indicator_match(axis: usize, reference: Arc<dyn ReferenceMap>, tolerance: f64) -> Self {
        Classifier { kind: ClassifierKind::IndicatorMatch { axis, reference, tolerance }, output_bound: None }
    }

    pub fn grid(grid: ScoreGrid) -> Self {
        Classifier { kind: ClassifierKind::Grid(grid), output_bound: None }
    }

    pub fn bounded(mut self, bound: f64) -> Self {
        self.output_bound = Some(bound);
        self
    }

    /// Feature positions the rule reads.
    pub fn reads(&self) -> Vec<usize> {
        let mut r = match &self.kind {
            ClassifierKind::LinearScore { weights, .. } => weights.iter().map(|&(i, _)| i).collect(),
            ClassifierKind::IndicatorMatch { axis, reference, .. } => {
                let mut r = reference.reads();
                r.push(*axis);
                r
            }
            ClassifierKind::Constant(_) => vec![],
            ClassifierKind::Grid(g) => g.features.clone(),
        };
        r.sort_unstable();
        r.dedup();
        r
    }

    fn clamp(&self, v: f64) -> f64 {
        match self.output_bound {
            Some(b) => v.clamp(0.0, b),
            None => v,
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if let Some(&max) = self.reads().last() {
            if max >= x.len() {
                return Err(Error::DimensionMismatch { expected: max + 1, got: x.len() });
            }
        }
        let raw = match &self.kind {
            ClassifierKind::LinearScore { weights, offset } => {
                weights.iter().fold(*offset, |acc, &(i, w)| acc + w * x[i])
            }
            ClassifierKind::IndicatorMatch { axis, reference, tolerance } => {
                if (x[*axis] - reference.value(x)?).abs() <= *tolerance {
                    1.0
                } else {
                    0.0
                }
            }
            ClassifierKind::Constant(v) => *v,
            ClassifierKind::Grid(g) => g.lookup(x),
        };
        Ok(self.clamp(raw))
    }

    /// Bounds on the output over all inputs, when known.
    pub fn range(&self) -> Option<(f64, f64)> {
        let raw = match &self.kind {
            ClassifierKind::LinearScore { weights, offset } => {
                if weights.iter().all(|&(_, w)| w == 0.0) {
                    Some((*offset, *offset))
                } else {
                    None
                }
            }
            ClassifierKind::IndicatorMatch { .. } => Some((0.0, 1.0)),
            ClassifierKind::Constant(v) => Some((*v, *v)),
            ClassifierKind::Grid(g) => Some(g.values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })),
        };
        match (raw, self.output_bound) {
            (Some((lo, hi)), _) => Some((self.clamp(lo), self.clamp(hi))),
            (None, Some(b)) => Some((0.0, b)),
            (None, None) => None,
        }
    }

    /// Gradient of an unclamped linear score, expanded to `dim` features.
    pub fn linear_gradient(&self, dim: usize) -> Option<Vec<f64>> {
        match (&self.kind, self.output_bound) {
            (ClassifierKind::LinearScore { weights, .. }, None) => {
                let mut g = vec![0.0; dim];
                for &(i, w) in weights {
                    *g.get_mut(i)? += w;
                }
                Some(g)
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug)]
    struct ReadSecond;
    impl ReferenceMap for ReadSecond {
        fn value(&self, x: &[f64]) -> Result<f64> {
            Ok(x[1])
        }
        fn reads(&self) -> Vec<usize> {
            vec![1]
        }
    }

    #[test]
    fn linear_and_clamp() {
        let f = Classifier::linear([(1, 2.0)], 1.0);
        assert_eq!(f.evaluate(&[9.0, 3.0]).unwrap(), 7.0);
        assert_eq!(f.clone().bounded(5.0).evaluate(&[9.0, 3.0]).unwrap(), 5.0);
        assert_eq!(f.clone().bounded(5.0).evaluate(&[9.0, -3.0]).unwrap(), 0.0);
        assert_eq!(f.range(), None);
        assert_eq!(f.clone().bounded(5.0).range(), Some((0.0, 5.0)));
        assert_eq!(f.linear_gradient(2), Some(vec![0.0, 2.0]));
        assert!(matches!(f.evaluate(&[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn indicator_match() {
        let f = Classifier::indicator_match(0, Arc::new(ReadSecond), 0.1);
        assert_eq!(f.evaluate(&[1.05, 1.0]).unwrap(), 1.0);
        assert_eq!(f.evaluate(&[1.2, 1.0]).unwrap(), 0.0);
        assert_eq!(f.reads(), vec![0, 1]);
        assert_eq!(f.range(), Some((0.0, 1.0)));
    }

    #[test]
    fn score_grid_clamps_to_boundary_cells() {
        let f = Classifier::grid(ScoreGrid {
            features: vec![0],
            lo: vec![0.0],
            step: vec![1.0],
            counts: vec![2],
            values: vec![0.25, 0.75],
        });
        assert_eq!(f.evaluate(&[-5.0]).unwrap(), 0.25);
        assert_eq!(f.evaluate(&[1.5]).unwrap(), 0.75);
        assert_eq!(f.evaluate(&[50.0]).unwrap(), 0.75);
        assert_eq!(f.range(), Some((0.25, 0.75)));
    }
}
