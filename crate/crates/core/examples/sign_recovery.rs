//! Recover which features cause a linear label, and with what sign, from
//! two cost evaluations per feature.

use strategem::agent::ActionSet;
use strategem::counterfactual::McSpec;
use strategem::monotonic::{build_outcome_monotonic_cost, linear_sign_recovery};
use strategem::scm::{CausalDag, Monomial, NodeSpec, NoiseSpec, Scm, StructuralFunction};

fn main() -> strategem::Result<()> {
    let g = NoiseSpec::standard_normal();
    // X1, X2 -> Y; Z1 = 0.3 Y^2 X1 + U, Z2 = Y + U
    let scm = Scm::new(
        CausalDag::new(["X1", "X2", "Y", "Z1", "Z2"], [(0, 2), (1, 2), (2, 3), (0, 3), (2, 4)]),
        vec![
            NodeSpec::additive(StructuralFunction::Constant(0.0), g),
            NodeSpec::additive(StructuralFunction::Constant(0.0), g),
            NodeSpec::additive(StructuralFunction::linear([(0, 1.5), (1, -0.7)], 0.0), g),
            NodeSpec::additive(StructuralFunction::Polynomial(vec![Monomial { coef: 0.3, powers: vec![(2, 2), (0, 1)] }]), g),
            NodeSpec::additive(StructuralFunction::linear([(2, 1.0)], 0.0), g),
        ],
        None,
    );
    let cost = build_outcome_monotonic_cost(&scm, 2, ActionSet::FullSpace(4), McSpec { n: 200, seed: 0 })?;
    let r = linear_sign_recovery(&cost)?;
    for f in &r.features {
        println!("{:>3}: causal {:5} sign {:+} (c(+e) = {}, c(-e) = {})", f.name, f.causal, f.sign, f.probe_plus, f.probe_minus);
    }
    println!("cost evaluations: {}", r.query_count);
    Ok(())
}
