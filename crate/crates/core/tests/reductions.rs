mod common;

use strategem::improvement::{population_improvement, AgentModel, McConfig, Verdict};
use strategem::incentive::{
    build_augmented_instance, good_incentives_oracle, orient_edges, ControlGrid, LinearFamily, OracleOutcome,
    ReductionConfig, Strategy,
};
use strategem::monotonic::{orient_edges_via_cost, ProbeConfig};
use strategem::scm::{skeleton_of, CausalDag, Monomial, NodeSpec, NoiseSpec, Scm, Skeleton, StructuralFunction};
use strategem::Error;

fn grid(seed: u64) -> ControlGrid {
    ControlGrid { seed, ..ControlGrid::default() }
}

fn mc(seed: u64) -> McConfig {
    McConfig { n_outer: 600, seed, ..McConfig::default() }
}

/// V -> W with W = V^3 / 2 - V + noise.
fn cubic_pair() -> Scm {
    let g = NoiseSpec::standard_normal();
    Scm::new(
        CausalDag::new(["V", "W"], [(0, 1)]),
        vec![
            NodeSpec::additive(StructuralFunction::Constant(0.0), g),
            NodeSpec::additive(
                StructuralFunction::Polynomial(vec![
                    Monomial { coef: 0.5, powers: vec![(0, 3)] },
                    Monomial { coef: -1.0, powers: vec![(0, 1)] },
                ]),
                g,
            ),
        ],
        None,
    )
}

/// A fork B <- A -> C plus C -> D.
fn fork() -> Scm {
    let g = NoiseSpec::standard_normal();
    Scm::new(
        CausalDag::new(["A", "B", "C", "D"], [(0, 1), (0, 2), (2, 3)]),
        vec![
            NodeSpec::additive(StructuralFunction::Constant(0.0), g),
            NodeSpec::additive(StructuralFunction::linear([(0, 1.5)], 0.0), g),
            NodeSpec::additive(StructuralFunction::linear([(0, -0.7)], 0.0), g),
            NodeSpec::additive(StructuralFunction::linear([(2, 1.1)], 0.0), g),
        ],
        None,
    )
}

#[test]
fn constructive_answers_survive_a_fresh_certificate() {
    let scm = fork();
    for &(i, j) in scm.dag().edges() {
        let aug = build_augmented_instance(&scm, (i, j), 0.5).unwrap();
        let answer = good_incentives_oracle(&aug.instance, &Strategy::Constructive(grid(1)), &mc(2)).unwrap();
        let OracleOutcome::Classifier(f) = answer.outcome else { panic!("{i}->{j} should admit a classifier") };
        assert_eq!(answer.off_axis_actions, 0);
        let inst = &aug.instance;
        let agent = AgentModel { classifier: f, cost: inst.cost.clone(), actions: inst.actions.clone(), solver: inst.solver };
        let again = population_improvement(&inst.scm, inst.label, &agent, &mc(77)).unwrap();
        assert_eq!(again.verdict, Verdict::Improvement, "{i}->{j}: {again:?}");
    }
}

#[test]
fn reversed_edges_get_no_classifier() {
    let scm = fork();
    for &(i, j) in scm.dag().edges() {
        let aug = build_augmented_instance(&scm, (j, i), 0.5).unwrap();
        let answer = good_incentives_oracle(&aug.instance, &Strategy::Constructive(grid(1)), &mc(2)).unwrap();
        assert!(!answer.is_classifier(), "{j}->{i}");
        assert!(answer.witness.is_none());
    }
}

#[test]
fn nonlinear_edge_orients_both_ways() {
    let scm = cubic_pair();
    let skeleton = skeleton_of(scm.dag());
    let r = orient_edges(&skeleton, &scm, &ReductionConfig::default()).unwrap();
    assert!(r.matches(scm.dag()));
    assert_eq!(r.n_calls(), 1);
    let c = orient_edges_via_cost(&skeleton, &scm, &ProbeConfig::default()).unwrap();
    assert!(c.matches(scm.dag()));
    assert_eq!(c.n_calls(), 1);
}

#[test]
fn fork_orientation_uses_one_call_per_edge() {
    let scm = fork();
    let skeleton = skeleton_of(scm.dag());
    let r = orient_edges(&skeleton, &scm, &ReductionConfig { seed: 4, ..ReductionConfig::default() }).unwrap();
    assert!(r.matches(scm.dag()));
    assert_eq!(r.transcript.len(), 3);
    assert!(r.transcript.iter().all(|t| t.n_calls == 1 && t.off_axis_actions == 0));
    assert!(r.transcript.iter().all(|t| t.classifier_found == (t.direction == t.edge)));
    let c = orient_edges_via_cost(&skeleton, &scm, &ProbeConfig { seed: 4, ..ProbeConfig::default() }).unwrap();
    assert_eq!(c.oriented.edges(), r.oriented.edges());
}

#[test]
fn orientation_is_thread_count_invariant() {
    let scm = fork();
    let skeleton = skeleton_of(scm.dag());
    let run = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| {
            let r = orient_edges(&skeleton, &scm, &ReductionConfig::default()).unwrap();
            r.transcript.iter().map(|t| t.certificate.map(|c| c.point.to_bits())).collect::<Vec<_>>()
        })
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn search_strategy_on_a_plain_instance() {
    let scm = cubic_pair();
    let aug = build_augmented_instance(&scm, (0, 1), 0.5).unwrap();
    let family = LinearFamily { weights: vec![-1.0, 0.0, 1.0], output_bound: Some(scm.support_bound()) };
    let answer = good_incentives_oracle(&aug.instance, &Strategy::Search { family: family.clone(), budget: 8 }, &mc(5))
        .unwrap();
    assert!(answer.is_classifier());
    assert_eq!(answer.certificate.unwrap().verdict, Verdict::Improvement);
    // The first member does not pay off.
    let tight = good_incentives_oracle(&aug.instance, &Strategy::Search { family, budget: 1 }, &mc(5));
    assert!(matches!(tight, Err(Error::BudgetExhausted(1))), "{tight:?}");
}

#[test]
fn wrong_skeleton_is_rejected() {
    let scm = fork();
    let wrong = Skeleton::new(scm.dag().nodes().to_vec(), [(0, 1), (1, 2)]);
    assert!(matches!(orient_edges(&wrong, &scm, &ReductionConfig::default()), Err(Error::SkeletonMismatch)));
    assert!(matches!(orient_edges_via_cost(&wrong, &scm, &ProbeConfig::default()), Err(Error::SkeletonMismatch)));
}

#[test]
fn non_adjacent_pair_has_no_instance() {
    let scm = fork();
    assert!(matches!(build_augmented_instance(&scm, (1, 3), 0.5), Err(Error::Precondition(_))));
}

#[test]
fn random_sign_edge_defeats_the_constructive_oracle() {
    let scm = common::eps_model();
    let aug = build_augmented_instance(&scm, (0, 1), 0.5).unwrap();
    let answer = good_incentives_oracle(&aug.instance, &Strategy::Constructive(grid(3)), &mc(3)).unwrap();
    assert!(!answer.is_classifier());
}
