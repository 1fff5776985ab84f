#![allow(dead_code)]

use rand::Rng;
use strategem::rng::stream;
use strategem::scm::{CausalDag, Monomial, NodeSpec, NoiseSpec, ProductInput, Scm, StructuralFunction};

/// X -> Y -> Z with unit slopes and unit Gaussian noise; label Y.
pub fn example_one() -> Scm {
    let g = NoiseSpec::standard_normal();
    Scm::new(
        CausalDag::new(["X", "Y", "Z"], [(0, 1), (1, 2)]),
        vec![
            NodeSpec::additive(StructuralFunction::Constant(0.0), g),
            NodeSpec::additive(StructuralFunction::linear([(0, 1.0)], 0.0), g),
            NodeSpec::additive(StructuralFunction::linear([(1, 1.0)], 0.0), g),
        ],
        None,
    )
}

/// Y = eps * X with eps a random sign and X standard normal.
pub fn eps_model() -> Scm {
    Scm::new(
        CausalDag::new(["X", "Y"], [(0, 1)]),
        vec![
            NodeSpec::additive(StructuralFunction::Constant(0.0), NoiseSpec::standard_normal()),
            NodeSpec::embedded(StructuralFunction::Product(ProductInput::Parent(0), ProductInput::Noise), NoiseSpec::Rademacher),
        ],
        None,
    )
}

/// Symmetric 2x2 matrix with unit determinant: rotation of diag(l, 1/l).
pub fn unit_det_matrix(seed: u64) -> Vec<Vec<f64>> {
    let mut r = stream(seed, 0);
    let theta: f64 = r.random_range(0.0..std::f64::consts::PI);
    let l: f64 = r.random_range(0.5..2.0);
    let (c, s) = (theta.cos(), theta.sin());
    let c11 = l * c * c + s * s / l;
    let c22 = l * s * s + c * c / l;
    let c12 = (l - 1.0 / l) * c * s;
    vec![vec![c11, c12], vec![c12, c22]]
}

/// Linear label over `n` root causes with random signed weights in
/// [0.5, 2], followed by `m` downstream features. Node order:
/// causes, label, downstream. Returns the model and the weights.
pub fn sign_model(n: usize, m: usize, seed: u64) -> (Scm, Vec<f64>) {
    let mut r = stream(seed, 0);
    let g = NoiseSpec::standard_normal();
    let label = n;
    let mut names: Vec<String> = (0..n).map(|i| format!("X{i}")).collect();
    names.push("Y".into());
    names.extend((0..m).map(|j| format!("Z{j}")));
    let theta: Vec<f64> = (0..n)
        .map(|_| {
            let mag: f64 = r.random_range(0.5..=2.0);
            if r.random::<bool>() { mag } else { -mag }
        })
        .collect();
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, label)).collect();
    let mut nodes: Vec<NodeSpec> = (0..n).map(|_| NodeSpec::additive(StructuralFunction::Constant(0.0), g)).collect();
    nodes.push(NodeSpec::additive(StructuralFunction::linear(theta.iter().copied().enumerate(), 0.0), g));
    for j in 0..m {
        let node = label + 1 + j;
        let a: f64 = r.random_range(-2.0..2.0);
        edges.push((label, node));
        let eq = if j % 2 == 0 || n == 0 {
            StructuralFunction::linear([(label, a)], 0.0)
        } else {
            let k = r.random_range(0..n);
            edges.push((k, node));
            StructuralFunction::Polynomial(vec![
                Monomial { coef: a, powers: vec![(label, 2)] },
                Monomial { coef: 1.0, powers: vec![(k, 1), (label, 1)] },
            ])
        };
        nodes.push(NodeSpec::additive(eq, g));
    }
    (Scm::new(CausalDag::new(names, edges), nodes, None), theta)
}
