//! Best-response agents: an individual with features `x` picks
//! `a* in argmax_a f(x + a) - c(a; x)` over an action set.

mod classifier;
mod cost;

use serde::{Deserialize, Serialize};

pub use classifier::{Classifier, ClassifierKind, ReferenceMap, ScoreGrid};
pub use cost::{ActionSet, CostFunction, QuadraticCost, TabularCost};

use crate::error::{Error, Result};

/// Largest number of grid points the grid solver will enumerate.
pub const MAX_GRID_POINTS: usize = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Solver {
    /// `a* = C^{-1} w` for an unclamped linear score under quadratic cost.
    ClosedForm,
    /// Exhaustive search over the lattice `resolution * Z^d` inside a centered
    /// hypercube of half-width `radius`; the zero action is always a candidate.
    Grid { resolution: f64, radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolverTag {
    ClosedForm,
    Grid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BestResponse {
    pub action: Vec<f64>,
    pub adapted: Vec<f64>,
    pub utility: f64,
    pub solver: SolverTag,
}

impl BestResponse {
    /// Indices of features the action moves.
    pub fn moved(&self) -> Vec<usize> {
        self.action.iter().enumerate().filter(|(_, &v)| v != 0.0).map(|(i, _)| i).collect()
    }
}

fn shifted(x: &[f64], a: &[f64]) -> Vec<f64> {
    x.iter().zip(a).map(|(x, a)| x + a).collect()
}

/// `f(x + a) - c(a; x)`.
pub fn utility(f: &Classifier, c: &CostFunction, x: &[f64], a: &[f64]) -> Result<f64> {
    if a.len() != x.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), got: a.len() });
    }
    Ok(f.evaluate(&shifted(x, a))? - c.cost(a, x)?)
}

/// Whether `a` earns at least `eps` times the maximal utility `oracle_max`.
pub fn is_epsilon_best_response(
    f: &Classifier,
    c: &CostFunction,
    x: &[f64],
    a: &[f64],
    eps: f64,
    oracle_max: f64,
) -> Result<bool> {
    Ok(utility(f, c, x, a)? >= eps * oracle_max)
}

pub fn best_response(
    f: &Classifier,
    c: &CostFunction,
    x: &[f64],
    actions: &ActionSet,
    solver: &Solver,
) -> Result<BestResponse> {
    if actions.dim() != x.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), got: actions.dim() });
    }
    match solver {
        Solver::ClosedForm => closed_form(f, c, x, actions),
        Solver::Grid { resolution, radius } => grid_search(f, c, x, actions, *resolution, *radius),
    }
}

fn closed_form(f: &Classifier, c: &CostFunction, x: &[f64], actions: &ActionSet) -> Result<BestResponse> {
    let d = x.len();
    let ActionSet::FullSpace(_) = actions else {
        return Err(Error::SolverMismatch("closed form needs the full action space".into()));
    };
    let CostFunction::Quadratic(q) = c else {
        return Err(Error::SolverMismatch("closed form needs a quadratic cost".into()));
    };
    if q.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: q.dim() });
    }
    let action = match (&f.kind, f.output_bound) {
        (ClassifierKind::Constant(_), _) => vec![0.0; d],
        _ => {
            let w = f
                .linear_gradient(d)
                .ok_or_else(|| Error::SolverMismatch("closed form needs an unclamped linear score".into()))?;
            q.solve(&w)
        }
    };
    let u = utility(f, c, x, &action)?;
    Ok(BestResponse { adapted: shifted(x, &action), action, utility: u, solver: SolverTag::ClosedForm })
}

struct Best {
    utility: f64,
    norm2: f64,
    action: Vec<f64>,
}

impl Best {
    /// Higher utility wins; near-ties go to the smaller norm, then the
    /// lexicographically smaller action.
    fn offer(&mut self, utility: f64, norm2: f64, action: &[f64]) {
        let tie = 1e-12 * (1.0 + self.utility.abs());
        let better = if utility > self.utility + tie {
            true
        } else if utility >= self.utility - tie {
            norm2 < self.norm2 || (norm2 == self.norm2 && action < self.action.as_slice())
        } else {
            false
        };
        if better {
            self.utility = utility;
            self.norm2 = norm2;
            self.action = action.to_vec();
        }
    }
}

/// True when every action leaving `axis` is strictly worse than doing nothing.
fn off_axis_dominated(f: &Classifier, c: &CostFunction) -> Option<usize> {
    match (c, f.range()) {
        (CostFunction::GatedCoordinate { axis, penalty }, Some((lo, hi))) if hi - penalty < lo => Some(*axis),
        _ => None,
    }
}

fn grid_search(
    f: &Classifier,
    c: &CostFunction,
    x: &[f64],
    actions: &ActionSet,
    resolution: f64,
    radius: f64,
) -> Result<BestResponse> {
    let d = x.len();
    let zero = vec![0.0; d];
    let mut best = Best { utility: utility(f, c, x, &zero)?, norm2: 0.0, action: zero };

    let axes: Vec<usize> = match actions {
        ActionSet::FiniteGrid(list) => {
            for a in list {
                let n2 = a.iter().map(|v| v * v).sum();
                best.offer(utility(f, c, x, a)?, n2, a);
            }
            return Ok(finish(x, best));
        }
        ActionSet::CoordinateLine { axis, .. } => vec![*axis],
        ActionSet::FullSpace(_) => match off_axis_dominated(f, c) {
            Some(axis) => vec![axis],
            None => (0..d).collect(),
        },
    };
    if !(resolution > 0.0 && radius >= 0.0 && resolution.is_finite() && radius.is_finite()) {
        return Err(Error::SolverMismatch("grid needs a positive resolution and finite radius".into()));
    }
    let k_max = (radius / resolution + 1e-9).floor() as i64;
    let per_axis = (2 * k_max + 1) as usize;
    let total = per_axis.checked_pow(axes.len() as u32).filter(|&t| t <= MAX_GRID_POINTS);
    let Some(total) = total else {
        return Err(Error::SolverMismatch(format!(
            "grid of {per_axis}^{} points exceeds the limit of {MAX_GRID_POINTS}",
            axes.len()
        )));
    };

    let mut ks = vec![-k_max; axes.len()];
    let mut a = vec![0.0; d];
    for _ in 0..total {
        for (slot, &axis) in axes.iter().enumerate() {
            a[axis] = ks[slot] as f64 * resolution;
        }
        let n2 = ks.iter().map(|k| k * k).sum::<i64>() as f64 * resolution * resolution;
        best.offer(utility(f, c, x, &a)?, n2, &a);
        for k in ks.iter_mut() {
            *k += 1;
            if *k <= k_max {
                break;
            }
            *k = -k_max;
        }
    }
    Ok(finish(x, best))
}

fn finish(x: &[f64], best: Best) -> BestResponse {
    BestResponse { adapted: shifted(x, &best.action), action: best.action, utility: best.utility, solver: SolverTag::Grid }
}
