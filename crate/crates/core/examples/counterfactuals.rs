//! Abduction, action, prediction on a chain `X -> Y -> Z`.

use strategem::counterfactual::{
    abduce, counterfactual_shift, counterfactual_value, expected_counterfactual, ConditioningEvent, Intervention, McSpec,
};
use strategem::scm::{forward_eval, CausalDag, NodeSpec, NoiseAssignment, NoiseSpec, Scm, StructuralFunction};

fn main() -> strategem::Result<()> {
    let g = NoiseSpec::standard_normal();
    let scm = Scm::new(
        CausalDag::new(["X", "Y", "Z"], [(0, 1), (1, 2)]),
        vec![
            NodeSpec::additive(StructuralFunction::Constant(0.0), g),
            NodeSpec::additive(StructuralFunction::linear([(0, 2.0)], 0.0), g),
            NodeSpec::additive(StructuralFunction::linear([(1, -1.0)], 1.0), g),
        ],
        Some(10.0),
    );
    let x = forward_eval(&scm, &NoiseAssignment(vec![0.5, -0.2, 0.3]))?;
    println!("factual: {:?}", x.0);

    let full = ConditioningEvent::full(&x);
    println!("recovered noise: {:?}", abduce(&scm, &full, 2)?.recovered);

    let iv = Intervention::new().set(0, 1.5);
    println!("Z had X been 1.5: {}", counterfactual_value(&scm, &x, &iv, 2)?);
    println!("Z under the null intervention: {}", counterfactual_value(&scm, &x, &Intervention::new(), 2)?);

    // Hide Y and Z: only X is observed, so their noise is drawn.
    let partial = ConditioningEvent::partial(3, [(0, x[0])]);
    let mc = McSpec { n: 20_000, seed: 1 };
    let e = expected_counterfactual(&scm, &partial, &iv, 2, &mc)?;
    println!("E[Z_(X:=1.5) | X={}] = {:.4} +- {:.4} (exact -2)", x[0], e.mean, e.std_error);

    // Paired shift of Y while Z is observed: Y's own noise cancels.
    let obs = ConditioningEvent::all_but(&x, 1);
    let s = counterfactual_shift(&scm, &obs, &iv, 1, &mc)?;
    println!("shift of Y: {} (exact {})", s.mean, 2.0 * (1.5 - x[0]));
    Ok(())
}
