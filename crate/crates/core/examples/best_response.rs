//! Best responses to a linear score under quadratic cost: closed form versus
//! grid search, and a gated cost that confines movement to one axis.

use strategem::agent::{best_response, ActionSet, Classifier, CostFunction, Solver};

fn main() -> strategem::Result<()> {
    let f = Classifier::linear([(0, 0.4), (1, 1.0)], 0.0);
    let c = CostFunction::quadratic(&[vec![2.0, -0.5], vec![-0.5, 0.625]])?;
    let x = [0.1, -0.3];
    let exact = best_response(&f, &c, &x, &ActionSet::FullSpace(2), &Solver::ClosedForm)?;
    let grid = best_response(&f, &c, &x, &ActionSet::FullSpace(2), &Solver::Grid { resolution: 0.01, radius: 4.0 })?;
    println!("closed form: a = {:?}, utility {:.6}", exact.action, exact.utility);
    println!("grid:        a = {:?}, utility {:.6}", grid.action, grid.utility);

    let b = 2.0;
    let bounded = Classifier::linear([(0, 1.0), (1, 1.0)], 0.0).bounded(b);
    let gated = CostFunction::GatedCoordinate { axis: 1, penalty: 2.0 * b };
    let r = best_response(&bounded, &gated, &x, &ActionSet::FullSpace(2), &Solver::Grid { resolution: 0.05, radius: 3.0 })?;
    println!("gated on axis 1: a = {:?}, adapted {:?}", r.action, r.adapted);
    Ok(())
}
