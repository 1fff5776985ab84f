//! Orient every edge of a random linear model with one good-incentives
//! oracle call per edge.

use strategem::incentive::{orient_edges, ReductionConfig};
use strategem::scm::{random_anm, skeleton_of, AnmSpec};

fn main() -> strategem::Result<()> {
    let scm = random_anm(&AnmSpec { n_nodes: 5, edge_probability: 0.5, weight_range: (0.5, 2.0), seed: 17 });
    let result = orient_edges(&skeleton_of(scm.dag()), &scm, &ReductionConfig::default())?;
    for t in &result.transcript {
        let (a, b) = t.direction;
        let cert = t.certificate.map_or("-".to_string(), |c| format!("{:.3} +- {:.3}", c.point, c.std_error));
        println!("{} -> {}  classifier={}  certificate {cert}", scm.name(a), scm.name(b), t.classifier_found);
    }
    println!("calls {} for {} edges; matches truth: {}", result.n_calls(), scm.dag().edges().len(), result.matches(scm.dag()));
    Ok(())
}
