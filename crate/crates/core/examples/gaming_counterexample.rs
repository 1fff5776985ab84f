//! Y = eps * X with a random sign: every feature is a cause, yet no
//! classifier on X moves the label in expectation.

use strategem::agent::{ActionSet, Classifier, CostFunction, Solver};
use strategem::improvement::{population_improvement, AgentModel, McConfig};
use strategem::incentive::{check_control_assumption, ControlGrid};
use strategem::scm::{CausalDag, NodeSpec, NoiseSpec, ProductInput, Scm, StructuralFunction};

fn main() -> strategem::Result<()> {
    let scm = Scm::new(
        CausalDag::new(["X", "Y"], [(0, 1)]),
        vec![
            NodeSpec::additive(StructuralFunction::Constant(0.0), NoiseSpec::standard_normal()),
            NodeSpec::embedded(StructuralFunction::Product(ProductInput::Parent(0), ProductInput::Noise), NoiseSpec::Rademacher),
        ],
        None,
    );
    for w in [0.5, 1.0, -2.0] {
        let agent = AgentModel {
            classifier: Classifier::linear([(0, w)], 0.0),
            cost: CostFunction::quadratic(&[vec![1.0]])?,
            actions: ActionSet::FullSpace(1),
            solver: Solver::ClosedForm,
        };
        let e = population_improvement(&scm, 1, &agent, &McConfig { seed: 3, ..McConfig::default() })?;
        println!("w = {w:+}: I(f) = {:+.5} +- {:.5} ({})", e.point, e.std_error, e.verdict.as_str());
    }
    let check = check_control_assumption(&scm, (0, 1), &ControlGrid::default())?;
    println!("control assumption on X -> Y holds: {} (lift {:+.4} +- {:.4})", check.holds, check.lift.mean, check.lift.std_error);
    Ok(())
}
