//! Counterfactual queries `Z_{X_A := x_A}(E)`: abduction of exogenous noise
//! from an observed event, surgery on the structural equations, prediction.
//!
//! Conditioning is exact abduction only. Noise of an additive node whose
//! parents are all observed is pinned by `u_j = x_j - g_j(pa_j)`; every other
//! noise term is free and is drawn from its prior, which is only legitimate
//! when no observed node descends from it. Queries that would need a
//! distorted posterior fail with [`Error::UnsupportedConditioning`], except
//! for the one case where the posterior cancels: the label's own additive
//! noise in a paired shift `Z_{iv}(E) - Z(E)`.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::rng;
use crate::scm::{Assignment, CausalDag, Composition, NodeSpec, NoiseAssignment, NoiseSpec, Scm, StructuralFunction};
use crate::stats::Estimate;

/// Hard interventions `X_i := v_i`. May be empty.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Intervention {
    targets: BTreeMap<usize, f64>,
}

impl Intervention {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(mut self, node: usize, value: f64) -> Self {
        self.targets.insert(node, value);
        self
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, f64)>) -> Self {
        Intervention { targets: pairs.into_iter().collect() }
    }

    pub fn targets(&self) -> &BTreeMap<usize, f64> {
        &self.targets
    }

    pub fn get(&self, node: usize) -> Option<f64> {
        self.targets.get(&node).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }
}

/// A partial observation of the endogenous nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditioningEvent {
    observed: Vec<Option<f64>>,
}

impl ConditioningEvent {
    pub fn full(x: &Assignment) -> Self {
        ConditioningEvent { observed: x.0.iter().copied().map(Some).collect() }
    }

    /// Observes every node except `hidden`.
    pub fn all_but(x: &Assignment, hidden: usize) -> Self {
        let mut e = Self::full(x);
        e.observed[hidden] = None;
        e
    }

    pub fn partial(n_nodes: usize, values: impl IntoIterator<Item = (usize, f64)>) -> Self {
        let mut observed = vec![None; n_nodes];
        for (i, v) in values {
            observed[i] = Some(v);
        }
        ConditioningEvent { observed }
    }

    pub fn value(&self, i: usize) -> Option<f64> {
        self.observed[i]
    }

    pub fn len(&self) -> usize {
        self.observed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observed.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbductionResult {
    /// Noise values pinned by the event.
    pub recovered: BTreeMap<usize, f64>,
    /// Noise terms left to their (conditional) law.
    pub free: BTreeSet<usize>,
}

/// Monte Carlo budget for counterfactual expectations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McSpec {
    pub n: usize,
    pub seed: u64,
}

/// Replaces the equation of each targeted node by a constant and cuts its
/// incoming edges. Untargeted nodes are unchanged.
pub fn intervene(scm: &Scm, iv: &Intervention) -> Result<Scm> {
    scm.ensure_valid()?;
    check_nodes(scm, iv)?;
    let dag = scm
        .dag()
        .with_edges(scm.dag().edges().iter().copied().filter(|&(_, c)| iv.get(c).is_none()));
    let nodes = (0..scm.len())
        .map(|i| match iv.get(i) {
            Some(v) => NodeSpec::additive(StructuralFunction::Constant(v), NoiseSpec::PointMass { value: 0.0 }),
            None => scm.node(i).clone(),
        })
        .collect();
    Ok(Scm::new(dag, nodes, Some(scm.support_bound())))
}

/// Evaluates the model under `iv` with a known noise realization:
/// the potential outcome `X_{iv}(u)`.
pub fn potential_outcome(scm: &Scm, noise: &NoiseAssignment, iv: &Intervention) -> Result<Assignment> {
    scm.ensure_valid()?;
    check_nodes(scm, iv)?;
    let mut x = vec![0.0; scm.len()];
    for &i in scm.order() {
        x[i] = match iv.get(i) {
            Some(v) => v,
            None => scm.structural_value(i, &x, noise[i])?,
        };
    }
    Ok(Assignment(x))
}

fn check_nodes(scm: &Scm, iv: &Intervention) -> Result<()> {
    match iv.targets.keys().find(|&&i| i >= scm.len()) {
        Some(i) => Err(Error::UnknownNode(format!("#{i}"))),
        None => Ok(()),
    }
}

fn check_event(scm: &Scm, event: &ConditioningEvent) -> Result<()> {
    if event.len() != scm.len() {
        return Err(Error::DimensionMismatch { expected: scm.len(), got: event.len() });
    }
    Ok(())
}

fn point_mass_consistent(recovered: f64, value: f64) -> bool {
    (recovered - value).abs() <= 1e-9 * (1.0 + value.abs().max(recovered.abs()))
}

/// Recovers the noise values pinned by `event`. The noise of an embedded
/// node that is observed and feeds `query_node` cannot be inverted and is
/// reported as [`Error::NonAdditiveAbduction`].
pub fn abduce(scm: &Scm, event: &ConditioningEvent, query_node: usize) -> Result<AbductionResult> {
    scm.ensure_valid()?;
    check_event(scm, event)?;
    if query_node >= scm.len() {
        return Err(Error::UnknownNode(format!("#{query_node}")));
    }
    let dag = scm.dag();
    let mut feeds_query = dag.ancestors(query_node);
    feeds_query[query_node] = true;
    let values: Vec<f64> = event.observed.iter().map(|v| v.unwrap_or(f64::NAN)).collect();

    let mut recovered = BTreeMap::new();
    let mut free = BTreeSet::new();
    for j in 0..scm.len() {
        let pinned = event.value(j).is_some() && dag.parents(j).iter().all(|&p| event.value(p).is_some());
        if !pinned {
            free.insert(j);
            continue;
        }
        let spec = scm.node(j);
        match (spec.composition, spec.noise) {
            (Composition::Additive, noise) => {
                let u = values[j] - scm.equation_value(j, &values, 0.0)?;
                if let NoiseSpec::PointMass { value } = noise {
                    if !point_mass_consistent(u, value) {
                        return Err(Error::InconsistentEvent(scm.name(j).to_string()));
                    }
                }
                recovered.insert(j, u);
            }
            (Composition::Embedded, NoiseSpec::PointMass { value }) => {
                recovered.insert(j, value);
            }
            (Composition::Embedded, _) if feeds_query[j] => {
                return Err(Error::NonAdditiveAbduction(scm.name(j).to_string()));
            }
            (Composition::Embedded, _) => {
                free.insert(j);
            }
        }
    }
    Ok(AbductionResult { recovered, free })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// `Z_{iv}(E)`
    Level,
    /// `Z_{iv}(E) - Z(E)` with shared noise.
    Shift,
}

#[derive(Clone, Copy)]
enum NoiseSource {
    /// Observed additive node: `u = x - g(pa)` at evaluation time.
    Recovered,
    /// Point-mass noise.
    Fixed(f64),
    /// Drawn from the prior; position in the draw vector.
    Drawn(usize),
    /// Cancels between the factual and counterfactual worlds.
    Cancelled,
    /// Not needed.
    Unused,
}

struct Plan<'a> {
    scm: &'a Scm,
    event: &'a ConditioningEvent,
    iv: &'a Intervention,
    target: usize,
    mode: Mode,
    relevant: Vec<bool>,
    affected: Vec<bool>,
    sources: Vec<NoiseSource>,
    drawn: Vec<usize>,
}

enum Prepared<'a> {
    Exact(f64),
    Plan(Plan<'a>),
}

fn prepare<'a>(
    scm: &'a Scm,
    event: &'a ConditioningEvent,
    iv: &'a Intervention,
    target: usize,
    mode: Mode,
) -> Result<Prepared<'a>> {
    scm.ensure_valid()?;
    check_event(scm, event)?;
    check_nodes(scm, iv)?;
    if target >= scm.len() {
        return Err(Error::UnknownNode(format!("#{target}")));
    }
    let dag: &CausalDag = scm.dag();
    let n = scm.len();

    let mut relevant = dag.ancestors(target);
    relevant[target] = true;

    let mut downstream = vec![false; n];
    for &t in iv.targets.keys() {
        for (j, d) in dag.descendants(t).into_iter().enumerate() {
            downstream[j] |= d;
        }
    }
    let affected: Vec<bool> = (0..n).map(|j| relevant[j] && downstream[j] && iv.get(j).is_none()).collect();

    // Structural shortcuts: the intervention cannot reach the target.
    if iv.get(target).is_none() && !affected[target] {
        match (mode, event.value(target)) {
            (Mode::Shift, _) => return Ok(Prepared::Exact(0.0)),
            (Mode::Level, Some(x)) => return Ok(Prepared::Exact(x)),
            (Mode::Level, None) => {}
        }
    }

    let observed_descendant = |j: usize| dag.descendants(j).iter().enumerate().any(|(k, &d)| d && event.value(k).is_some());

    let mut sources = vec![NoiseSource::Unused; n];
    let mut drawn = Vec::new();
    let values: Vec<f64> = event.observed.iter().map(|v| v.unwrap_or(f64::NAN)).collect();
    for j in 0..n {
        if !relevant[j] {
            continue;
        }
        let spec = scm.node(j);
        let name = || scm.name(j).to_string();
        if let Some(x) = event.value(j) {
            // Observed nodes keep their value in the factual world.
            if dag.parents(j).iter().all(|&p| event.value(p).is_some()) && spec.composition == Composition::Additive {
                if let NoiseSpec::PointMass { value } = spec.noise {
                    let u = x - scm.equation_value(j, &values, 0.0)?;
                    if !point_mass_consistent(u, value) {
                        return Err(Error::InconsistentEvent(name()));
                    }
                }
            }
            if affected[j] {
                sources[j] = match (spec.composition, spec.noise) {
                    (Composition::Additive, _) => NoiseSource::Recovered,
                    (Composition::Embedded, NoiseSpec::PointMass { value }) => NoiseSource::Fixed(value),
                    (Composition::Embedded, _) => return Err(Error::NonAdditiveAbduction(name())),
                };
            }
        } else {
            let cancels = mode == Mode::Shift
                && j == target
                && iv.get(j).is_none()
                && spec.composition == Composition::Additive;
            sources[j] = if let NoiseSpec::PointMass { value } = spec.noise {
                NoiseSource::Fixed(value)
            } else if cancels {
                NoiseSource::Cancelled
            } else if observed_descendant(j) {
                return Err(Error::UnsupportedConditioning(name()));
            } else {
                drawn.push(j);
                NoiseSource::Drawn(drawn.len() - 1)
            };
        }
    }
    Ok(Prepared::Plan(Plan { scm, event, iv, target, mode, relevant, affected, sources, drawn }))
}

impl Plan<'_> {
    fn evaluate(&self, draws: &[f64], fact: &mut [f64], cf: &mut [f64]) -> Result<f64> {
        let scm = self.scm;
        for &j in scm.order() {
            if !self.relevant[j] {
                continue;
            }
            let u = match self.sources[j] {
                NoiseSource::Fixed(v) => v,
                NoiseSource::Drawn(k) => draws[k],
                NoiseSource::Cancelled => scm.node(j).noise.mean(),
                NoiseSource::Recovered | NoiseSource::Unused => f64::NAN,
            };
            fact[j] = match self.event.value(j) {
                Some(x) => x,
                None => scm.structural_value(j, fact, u)?,
            };
            cf[j] = if let Some(v) = self.iv.get(j) {
                v
            } else if !self.affected[j] {
                fact[j]
            } else {
                let u = match self.sources[j] {
                    NoiseSource::Recovered => fact[j] - scm.equation_value(j, fact, 0.0)?,
                    _ => u,
                };
                scm.structural_value(j, cf, u)?
            };
        }
        Ok(match self.mode {
            Mode::Level => cf[self.target],
            Mode::Shift => cf[self.target] - fact[self.target],
        })
    }

    fn estimate(&self, mc: &McSpec) -> Result<Estimate> {
        let n = self.scm.len();
        if self.drawn.is_empty() {
            let (mut fact, mut cf) = (vec![f64::NAN; n], vec![f64::NAN; n]);
            return Ok(Estimate::exact(self.evaluate(&[], &mut fact, &mut cf)?));
        }
        if mc.n == 0 {
            return Err(Error::Precondition("Monte Carlo sample size must be positive".into()));
        }
        let laws: Vec<NoiseSpec> = self.drawn.iter().map(|&j| self.scm.node(j).noise).collect();
        let samples = rng::try_par_draws(mc.n, mc.seed, |_, r| {
            let draws: Vec<f64> = laws.iter().map(|l| l.sample(r)).collect();
            let (mut fact, mut cf) = (vec![f64::NAN; n], vec![f64::NAN; n]);
            self.evaluate(&draws, &mut fact, &mut cf)
        })?;
        Ok(Estimate::from_samples(&samples))
    }
}

/// Deterministic counterfactual `target_{iv}({X = observed})` for a fully
/// observed assignment. A null intervention returns `observed[target]`
/// bit-exactly.
pub fn counterfactual_value(scm: &Scm, observed: &Assignment, iv: &Intervention, target: usize) -> Result<f64> {
    let event = ConditioningEvent::full(observed);
    match prepare(scm, &event, iv, target, Mode::Level)? {
        Prepared::Exact(v) => Ok(v),
        Prepared::Plan(plan) => {
            debug_assert!(plan.drawn.is_empty(), "full observation leaves no free noise");
            plan.estimate(&McSpec { n: 1, seed: 0 }).map(|e| e.mean)
        }
    }
}

/// `E[target_{iv}(E)]` with recovered noise held fixed and free noise drawn
/// from its prior. Exact (standard error 0) when no free noise is involved.
pub fn expected_counterfactual(
    scm: &Scm,
    event: &ConditioningEvent,
    iv: &Intervention,
    target: usize,
    mc: &McSpec,
) -> Result<Estimate> {
    match prepare(scm, event, iv, target, Mode::Level)? {
        Prepared::Exact(v) => Ok(Estimate::exact(v)),
        Prepared::Plan(plan) => plan.estimate(mc),
    }
}

/// `E[target_{iv}(E) - target(E)]`, both worlds sharing the same noise.
///
/// Interventions that cannot reach the target give exactly 0 without any
/// numerical work. When the target is additive and unobserved, its own noise
/// cancels, so observed descendants of the target are allowed here.
pub fn counterfactual_shift(
    scm: &Scm,
    event: &ConditioningEvent,
    iv: &Intervention,
    target: usize,
    mc: &McSpec,
) -> Result<Estimate> {
    match prepare(scm, event, iv, target, Mode::Shift)? {
        Prepared::Exact(v) => Ok(Estimate::exact(v)),
        Prepared::Plan(plan) => plan.estimate(mc),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scm::{forward_eval, sample, ProductInput};

    fn chain2() -> Scm {
        Scm::new(
            CausalDag::new(["X", "Y"], [(0, 1)]),
            vec![
                NodeSpec::additive(StructuralFunction::Constant(0.0), NoiseSpec::standard_normal()),
                NodeSpec::additive(StructuralFunction::linear([(0, 1.0)], 0.0), NoiseSpec::standard_normal()),
            ],
            Some(10.0),
        )
    }

    fn linear_w(theta: f64, sigma: f64) -> Scm {
        Scm::new(
            CausalDag::new(["X", "W"], [(0, 1)]),
            vec![
                NodeSpec::additive(StructuralFunction::Constant(0.0), NoiseSpec::standard_normal()),
                NodeSpec::additive(
                    StructuralFunction::linear([(0, theta)], 0.5),
                    NoiseSpec::Gaussian { mean: 0.0, stddev: sigma },
                ),
            ],
            Some(10.0),
        )
    }

    fn example_one() -> Scm {
        let g = NoiseSpec::standard_normal();
        Scm::new(
            CausalDag::new(["X", "Y", "Z"], [(0, 1), (1, 2)]),
            vec![
                NodeSpec::additive(StructuralFunction::Constant(0.0), g),
                NodeSpec::additive(StructuralFunction::linear([(0, 1.0)], 0.0), g),
                NodeSpec::additive(StructuralFunction::linear([(1, 1.0)], 0.0), g),
            ],
            Some(10.0),
        )
    }

    fn eps_model() -> Scm {
        Scm::new(
            CausalDag::new(["X", "Y"], [(0, 1)]),
            vec![
                NodeSpec::additive(StructuralFunction::Constant(0.0), NoiseSpec::standard_normal()),
                NodeSpec::embedded(
                    StructuralFunction::Product(ProductInput::Parent(0), ProductInput::Noise),
                    NoiseSpec::Rademacher,
                ),
            ],
            Some(10.0),
        )
    }

    #[test]
    fn null_intervention_is_identity() {
        let scm = example_one();
        let sub = intervene(&scm, &Intervention::new()).unwrap();
        assert_eq!(sub.dag(), scm.dag());
        assert_eq!(sub.nodes(), scm.nodes());
    }

    #[test]
    fn surgery_on_chain() {
        let scm = example_one();
        let sub = intervene(&scm, &Intervention::new().set(1, 0.0)).unwrap();
        assert_eq!(sub.node(0), scm.node(0));
        assert_eq!(sub.node(2), scm.node(2));
        assert_eq!(sub.node(1).equation, StructuralFunction::Constant(0.0));
        assert!(sub.dag().parents(1).is_empty());
        let x = forward_eval(&sub, &NoiseAssignment(vec![3.0, 0.0, 0.25])).unwrap();
        assert_eq!(x.0, vec![3.0, 0.0, 0.25]);
    }

    #[test]
    fn example_one_double_intervention_replaces_both_equations() {
        let (c11, c12) = (2.0, -0.5);
        let (x, z) = (0.3, -1.2);
        let sub = intervene(&example_one(), &Intervention::new().set(0, x - c12).set(2, z + c11)).unwrap();
        assert_eq!(sub.node(0).equation, StructuralFunction::Constant(x - c12));
        assert_eq!(sub.node(2).equation, StructuralFunction::Constant(z + c11));
        assert!(intervene(&example_one(), &Intervention::new().set(5, 0.0)).is_err());
    }

    #[test]
    fn abduction_examples() {
        let scm = chain2();
        let full = ConditioningEvent::full(&Assignment(vec![1.0, 1.5]));
        let r = abduce(&scm, &full, 1).unwrap();
        assert_eq!(r.recovered, BTreeMap::from([(0, 1.0), (1, 0.5)]));
        assert!(r.free.is_empty());

        let partial = ConditioningEvent::partial(2, [(0, 1.0)]);
        let r = abduce(&scm, &partial, 1).unwrap();
        assert_eq!(r.recovered, BTreeMap::from([(0, 1.0)]));
        assert_eq!(r.free, BTreeSet::from([1]));
    }

    #[test]
    fn abduction_refuses_embedded_noise_feeding_the_query() {
        let scm = eps_model();
        let full = ConditioningEvent::full(&Assignment(vec![2.0, -2.0]));
        assert!(matches!(abduce(&scm, &full, 1), Err(Error::NonAdditiveAbduction(n)) if n == "Y"));
        assert!(abduce(&scm, &full, 0).is_ok());
    }

    #[test]
    fn inconsistent_point_mass() {
        let scm = Scm::new(
            CausalDag::new(["X", "C"], [(0, 1)]),
            vec![
                NodeSpec::additive(StructuralFunction::Constant(0.0), NoiseSpec::standard_normal()),
                NodeSpec::additive(StructuralFunction::linear([(0, 1.0)], 0.0), NoiseSpec::PointMass { value: 0.0 }),
            ],
            Some(10.0),
        );
        let bad = ConditioningEvent::full(&Assignment(vec![1.0, 2.0]));
        assert!(matches!(abduce(&scm, &bad, 1), Err(Error::InconsistentEvent(_))));
    }

    #[test]
    fn round_trip_over_random_samples() {
        let scm = example_one();
        for (x, u) in sample(&scm, 1000, 5).unwrap() {
            let r = abduce(&scm, &ConditioningEvent::full(&x), 2).unwrap();
            let recovered = NoiseAssignment((0..3).map(|j| r.recovered[&j]).collect());
            for j in 0..3 {
                assert!((recovered[j] - u[j]).abs() <= 4.0 * f64::EPSILON * x.sup_norm().max(1.0));
            }
            let again = forward_eval(&scm, &recovered).unwrap();
            for j in 0..3 {
                assert!((again[j] - x[j]).abs() <= 8.0 * f64::EPSILON * x.sup_norm().max(1.0));
            }
        }
    }

    #[test]
    fn counterfactual_value_examples() {
        let scm = example_one();
        let obs = Assignment(vec![0.7, 1.1, 0.4]);
        let delta = 0.5;
        let y = counterfactual_value(&scm, &obs, &Intervention::new().set(0, 0.7 + delta), 1).unwrap();
        assert!((y - (1.1 + delta)).abs() < 1e-12);
        let y = counterfactual_value(&scm, &obs, &Intervention::new().set(2, 100.0), 1).unwrap();
        assert_eq!(y, 1.1);
        let y = counterfactual_value(&scm, &obs, &Intervention::new(), 1).unwrap();
        assert_eq!(y, 1.1);
    }

    #[test]
    fn expected_counterfactual_linear_mean_and_se() {
        let (theta, sigma) = (1.5, 0.8);
        let scm = linear_w(theta, sigma);
        let event = ConditioningEvent::partial(2, [(0, 0.2)]);
        let x_star = 2.0;
        let n = 20_000;
        let e = expected_counterfactual(&scm, &event, &Intervention::new().set(0, x_star), 1, &McSpec { n, seed: 3 })
            .unwrap();
        let mean = 0.5 + theta * x_star;
        assert!((e.mean - mean).abs() < 4.0 * e.std_error, "{e:?}");
        let se = sigma / (n as f64).sqrt();
        assert!((e.std_error - se).abs() < 0.05 * se);
    }

    #[test]
    fn degenerate_estimate_for_full_observation() {
        let scm = chain2();
        let event = ConditioningEvent::full(&Assignment(vec![0.4, -0.3]));
        let e = expected_counterfactual(&scm, &event, &Intervention::new(), 1, &McSpec { n: 100, seed: 0 }).unwrap();
        assert_eq!(e, Estimate::exact(-0.3));
    }

    #[test]
    fn embedded_counterexample_has_zero_mean() {
        let scm = eps_model();
        let event = ConditioningEvent::partial(2, [(0, 1.3)]);
        let e = expected_counterfactual(&scm, &event, &Intervention::new().set(0, -2.0), 1, &McSpec { n: 5000, seed: 8 })
            .unwrap();
        assert!(e.mean.abs() < 4.0 * e.std_error, "{e:?}");
        assert!(e.std_error > 0.0);
    }

    #[test]
    fn observed_descendant_of_free_noise_is_refused() {
        // Y unobserved, Z observed: Y's noise law is distorted.
        let scm = example_one();
        let event = ConditioningEvent::partial(3, [(0, 0.1), (2, 0.5)]);
        let iv = Intervention::new().set(0, 1.0);
        let err = expected_counterfactual(&scm, &event, &iv, 1, &McSpec { n: 10, seed: 0 }).unwrap_err();
        assert!(matches!(err, Error::UnsupportedConditioning(n) if n == "Y"));
        // The paired shift is still exact: Y's noise cancels.
        let s = counterfactual_shift(&scm, &event, &iv, 1, &McSpec { n: 10, seed: 0 }).unwrap();
        assert_eq!(s.std_error, 0.0);
        assert!((s.mean - 0.9).abs() < 1e-12);
    }

    #[test]
    fn shift_is_structurally_zero_for_non_ancestors() {
        let scm = example_one();
        let event = ConditioningEvent::partial(3, [(0, 0.1), (2, 0.5)]);
        let s = counterfactual_shift(&scm, &event, &Intervention::new().set(2, 7.0), 1, &McSpec { n: 10, seed: 0 })
            .unwrap();
        assert_eq!(s, Estimate::exact(0.0));
    }

    #[test]
    fn potential_outcome_matches_surgery() {
        let scm = example_one();
        let iv = Intervention::new().set(1, 2.0);
        let u = NoiseAssignment(vec![0.1, 0.2, 0.3]);
        let a = potential_outcome(&scm, &u, &iv).unwrap();
        let b = forward_eval(&intervene(&scm, &iv).unwrap(), &NoiseAssignment(vec![0.1, 0.0, 0.3])).unwrap();
        assert_eq!(a, b);
    }
}
