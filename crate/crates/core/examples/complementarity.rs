//! Rewarding only a downstream feature still improves the label when moving
//! the upstream cause is cheaper jointly: I(f) = -C12 for a unit-determinant cost.

use strategem::agent::{ActionSet, Classifier, CostFunction, Solver};
use strategem::improvement::{population_improvement, AgentModel, McConfig};
use strategem::scm::{CausalDag, NodeSpec, NoiseSpec, Scm, StructuralFunction};

fn main() -> strategem::Result<()> {
    let g = NoiseSpec::standard_normal();
    // X -> Y -> Z, label Y, features (X, Z), classifier f(x, z) = z.
    let scm = Scm::new(
        CausalDag::new(["X", "Y", "Z"], [(0, 1), (1, 2)]),
        vec![
            NodeSpec::additive(StructuralFunction::Constant(0.0), g),
            NodeSpec::additive(StructuralFunction::linear([(0, 1.0)], 0.0), g),
            NodeSpec::additive(StructuralFunction::linear([(1, 1.0)], 0.0), g),
        ],
        None,
    );
    println!("{:>8} {:>12} {:>10} verdict", "C12", "I(f)", "se");
    for c12 in [-0.8, -0.5, -0.2, 0.0, 0.3] {
        let c11 = 1.5;
        let c22 = (1.0 + c12 * c12) / c11;
        let agent = AgentModel {
            classifier: Classifier::linear([(1, 1.0)], 0.0),
            cost: CostFunction::quadratic(&[vec![c11, c12], vec![c12, c22]])?,
            actions: ActionSet::FullSpace(2),
            solver: Solver::ClosedForm,
        };
        let e = population_improvement(&scm, 1, &agent, &McConfig::default())?;
        println!("{c12:>8} {:>12.6} {:>10.2e} {}", e.point, e.std_error, e.verdict.as_str());
    }
    Ok(())
}
