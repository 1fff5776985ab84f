use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{CausalDag, NodeSpec, NoiseSpec, Scm, StructuralFunction};
use crate::rng;

/// Parameters of the random linear-Gaussian ANM generator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnmSpec {
    pub n_nodes: usize,
    pub edge_probability: f64,
    /// Magnitude range `[min, max]`; each weight gets a random sign.
    pub weight_range: (f64, f64),
    pub seed: u64,
}

/// Random DAG over a random topological order with linear equations and
/// unit Gaussian noise. Nodes are named `X0..X{n-1}`.
pub fn random_anm(spec: &AnmSpec) -> Scm {
    let AnmSpec { n_nodes, edge_probability, weight_range: (w_min, w_max), seed } = *spec;
    assert!(n_nodes >= 2, "need at least two nodes");
    assert!(w_min > 0.0 && w_min <= w_max, "weight range must exclude zero");

    let mut r = rng::stream(seed, 0);
    let mut perm: Vec<usize> = (0..n_nodes).collect();
    perm.shuffle(&mut r);

    let mut edges = Vec::new();
    let mut weights: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n_nodes];
    for a in 0..n_nodes {
        for b in a + 1..n_nodes {
            if r.random::<f64>() < edge_probability {
                let (from, to) = (perm[a], perm[b]);
                let magnitude = if w_max > w_min { r.random_range(w_min..=w_max) } else { w_min };
                let sign = if r.random::<bool>() { 1.0 } else { -1.0 };
                edges.push((from, to));
                weights[to].push((from, sign * magnitude));
            }
        }
    }

    let dag = CausalDag::new((0..n_nodes).map(|i| format!("X{i}")), edges);
    let nodes = weights
        .into_iter()
        .map(|w| {
            let eq = if w.is_empty() { StructuralFunction::Constant(0.0) } else { StructuralFunction::linear(w, 0.0) };
            NodeSpec::additive(eq, NoiseSpec::standard_normal())
        })
        .collect();
    Scm::new(dag, nodes, None)
}
