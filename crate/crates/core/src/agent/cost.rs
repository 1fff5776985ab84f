use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// `c(a; x) = a^T C a / 2` with `C` symmetric positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticCost {
    c: DMatrix<f64>,
}

impl QuadraticCost {
    pub fn new(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.len();
        if d == 0 || rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidCost("cost matrix must be square and non-empty".into()));
        }
        let c = DMatrix::from_fn(d, d, |i, j| rows[i][j]);
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidCost("cost matrix has non-finite entries".into()));
        }
        for i in 0..d {
            for j in 0..i {
                if c[(i, j)] != c[(j, i)] {
                    return Err(Error::InvalidCost("cost matrix is not symmetric".into()));
                }
            }
        }
        if c.clone().cholesky().is_none() {
            return Err(Error::InvalidCost("cost matrix is not positive definite".into()));
        }
        Ok(QuadraticCost { c })
    }

    pub fn dim(&self) -> usize {
        self.c.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.c
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.c[(i, j)]
    }

    pub fn eval(&self, a: &[f64]) -> f64 {
        let v = DVector::from_column_slice(a);
        0.5 * v.dot(&(&self.c * &v))
    }

    /// `C^{-1} w`.
    pub fn solve(&self, w: &[f64]) -> Vec<f64> {
        let chol = self.c.clone().cholesky().expect("checked positive definite at construction");
        chol.solve(&DVector::from_column_slice(w)).iter().copied().collect()
    }

    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        let rows: Vec<Vec<f64>> =
            (0..self.dim()).map(|i| (0..self.dim()).map(|j| lambda * self.c[(i, j)]).collect()).collect();
        QuadraticCost::new(&rows)
    }
}

/// Costs tabulated on rounded `(x, a)` cells.
#[derive(Debug, Clone, PartialEq)]
pub struct TabularCost {
    pub resolution: f64,
    pub entries: BTreeMap<(Vec<i64>, Vec<i64>), f64>,
}

pub(crate) fn cell_key(v: &[f64], resolution: f64) -> Vec<i64> {
    v.iter().map(|x| (x / resolution).round() as i64).collect()
}

impl TabularCost {
    pub fn new(resolution: f64) -> Self {
        TabularCost { resolution, entries: BTreeMap::new() }
    }

    pub fn insert(&mut self, x: &[f64], a: &[f64], cost: f64) {
        self.entries.insert((cell_key(x, self.resolution), cell_key(a, self.resolution)), cost);
    }

    pub fn get(&self, x: &[f64], a: &[f64]) -> Option<f64> {
        self.entries.get(&(cell_key(x, self.resolution), cell_key(a, self.resolution))).copied()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CostFunction {
    Quadratic(QuadraticCost),
    /// Free along `axis`; `penalty` for any action touching another coordinate.
    GatedCoordinate { axis: usize, penalty: f64 },
    TabularOutcome(TabularCost),
    Zero,
}

impl CostFunction {
    pub fn quadratic(rows: &[Vec<f64>]) -> Result<Self> {
        QuadraticCost::new(rows).map(CostFunction::Quadratic)
    }

    pub fn cost(&self, a: &[f64], x: &[f64]) -> Result<f64> {
        match self {
            CostFunction::Quadratic(q) => {
                if a.len() != q.dim() {
                    return Err(Error::DimensionMismatch { expected: q.dim(), got: a.len() });
                }
                Ok(q.eval(a))
            }
            CostFunction::GatedCoordinate { axis, penalty } => {
                if *axis >= a.len() {
                    return Err(Error::DimensionMismatch { expected: axis + 1, got: a.len() });
                }
                let off_axis = a.iter().enumerate().any(|(k, &v)| k != *axis && v != 0.0);
                Ok(if off_axis { *penalty } else { 0.0 })
            }
            CostFunction::TabularOutcome(t) => t.get(x, a).ok_or(Error::CostUndefined),
            CostFunction::Zero => Ok(0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ActionSet {
    FullSpace(usize),
    /// `{alpha * e_axis}` in a `dim`-dimensional feature space.
    CoordinateLine { axis: usize, dim: usize },
    FiniteGrid(Vec<Vec<f64>>),
}

impl ActionSet {
    /// A finite action list; the zero action must be present.
    pub fn finite(actions: Vec<Vec<f64>>) -> Result<Self> {
        let dim = actions.first().map(Vec::len).unwrap_or(0);
        if actions.iter().any(|a| a.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: 0 });
        }
        if !actions.iter().any(|a| a.iter().all(|&v| v == 0.0)) {
            return Err(Error::Precondition("finite action set must contain the zero action".into()));
        }
        Ok(ActionSet::FiniteGrid(actions))
    }

    pub fn dim(&self) -> usize {
        match self {
            ActionSet::FullSpace(d) => *d,
            ActionSet::CoordinateLine { dim, .. } => *dim,
            ActionSet::FiniteGrid(v) => v.first().map(Vec::len).unwrap_or(0),
        }
    }

    pub fn contains(&self, a: &[f64]) -> bool {
        a.len() == self.dim()
            && match self {
                ActionSet::FullSpace(_) => a.iter().all(|v| v.is_finite()),
                ActionSet::CoordinateLine { axis, .. } => {
                    a.iter().enumerate().all(|(k, &v)| if k == *axis { v.is_finite() } else { v == 0.0 })
                }
                ActionSet::FiniteGrid(list) => list.iter().any(|b| b.as_slice() == a),
            }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_validation() {
        assert!(CostFunction::quadratic(&[vec![2.0, -0.5], vec![-0.5, 0.625]]).is_ok());
        assert!(CostFunction::quadratic(&[vec![1.0, 0.2], vec![0.3, 1.0]]).is_err());
        assert!(CostFunction::quadratic(&[vec![1.0, 2.0], vec![2.0, 1.0]]).is_err());
    }

    #[test]
    fn quadratic_values() {
        let c = CostFunction::quadratic(&[vec![2.0, -0.5], vec![-0.5, 0.625]]).unwrap();
        assert_eq!(c.cost(&[0.0, 0.0], &[1.0, 1.0]).unwrap(), 0.0);
        // a = (0.5, 2): a^T C a = 2*0.25 - 2*0.5*0.5*2 + 0.625*4 = 0.5 - 1 + 2.5 = 2
        assert!((c.cost(&[0.5, 2.0], &[0.0, 0.0]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gated_cost() {
        let c = CostFunction::GatedCoordinate { axis: 1, penalty: 8.0 };
        assert_eq!(c.cost(&[0.0, 3.0, 0.0], &[0.0; 3]).unwrap(), 0.0);
        assert_eq!(c.cost(&[0.1, 3.0, 0.0], &[0.0; 3]).unwrap(), 8.0);
        assert_eq!(c.cost(&[0.0, 0.0, -1.0], &[0.0; 3]).unwrap(), 8.0);
    }

    #[test]
    fn tabular_cost_lookup() {
        let mut t = TabularCost::new(1e-6);
        t.insert(&[0.0, 1.0], &[1.0, 0.0], 0.7);
        let c = CostFunction::TabularOutcome(t);
        assert_eq!(c.cost(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.7);
        assert!(matches!(c.cost(&[2.0, 0.0], &[0.0, 1.0]), Err(Error::CostUndefined)));
    }

    #[test]
    fn action_sets() {
        assert!(ActionSet::finite(vec![vec![1.0]]).is_err());
        let s = ActionSet::finite(vec![vec![0.0], vec![1.0]]).unwrap();
        assert!(s.contains(&[1.0]) && !s.contains(&[2.0]));
        let line = ActionSet::CoordinateLine { axis: 0, dim: 2 };
        assert!(line.contains(&[3.0, 0.0]) && !line.contains(&[3.0, 1.0]));
    }
}
