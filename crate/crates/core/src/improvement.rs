//! The improvement functional: how much the true label moves, on average,
//! when individuals best-respond to a classifier.
//!
//! Each individual's contribution is the paired counterfactual shift
//! `E[Y_{X:=x+a*}({X=x}) - Y({X=x})]`, with both worlds sharing noise. Its
//! population mean equals `E_X E[Y_{X:=x+a*}({X=x})] - E[Y]` by the tower
//! property, and it stays exact when the label has observed descendants.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::agent::{best_response, ActionSet, BestResponse, Classifier, CostFunction, Solver};
use crate::counterfactual::{counterfactual_shift, ConditioningEvent, Intervention, McSpec};
use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::scm::{sample, Scm};
use crate::stats::{z_one_sided, Estimate};

/// How individuals respond: the rule they face, what moving costs, what they may do.
#[derive(Debug, Clone)]
pub struct AgentModel {
    pub classifier: Classifier,
    pub cost: CostFunction,
    pub actions: ActionSet,
    pub solver: Solver,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct McConfig {
    pub n_outer: usize,
    pub n_inner: usize,
    pub seed: u64,
    pub alpha: f64,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig { n_outer: 2000, n_inner: 200, seed: 0, alpha: 0.01 }
    }
}

impl McConfig {
    pub fn check(&self) -> Result<()> {
        if self.n_outer == 0 || self.n_inner == 0 {
            return Err(Error::Precondition("Monte Carlo sample sizes must be positive".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Precondition(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Improvement,
    Gaming,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Improvement => "improvement",
            Verdict::Gaming => "gaming",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImprovementEstimate {
    pub point: f64,
    pub std_error: f64,
    pub n: usize,
    pub verdict: Verdict,
    pub alpha: f64,
}

impl ImprovementEstimate {
    /// One-sided test at `alpha`: positive beyond `z` standard errors is
    /// improvement, non-positive even at the upper bound is gaming.
    pub fn from_estimate(e: Estimate, alpha: f64) -> Self {
        let z = z_one_sided(alpha);
        let verdict = if e.mean - z * e.std_error > 0.0 {
            Verdict::Improvement
        } else if e.mean + z * e.std_error <= 0.0 {
            Verdict::Gaming
        } else {
            Verdict::Inconclusive
        };
        ImprovementEstimate { point: e.mean, std_error: e.std_error, n: e.n, verdict, alpha }
    }
}

/// Every node except the label, in index order.
pub fn feature_nodes(scm: &Scm, label: usize) -> Vec<usize> {
    (0..scm.len()).filter(|&i| i != label).collect()
}

/// Intervention moving each adapted feature to its new value.
pub fn adaptation_intervention(features: &[usize], x: &[f64], br: &BestResponse) -> Intervention {
    Intervention::from_pairs(
        features.iter().zip(x).zip(&br.action).filter(|(_, &a)| a != 0.0).map(|((&node, &v), &a)| (node, v + a)),
    )
}

fn event_for(scm: &Scm, features: &[usize], x: &[f64]) -> ConditioningEvent {
    ConditioningEvent::partial(scm.len(), features.iter().copied().zip(x.iter().copied()))
}

fn check_label(scm: &Scm, label: usize) -> Result<()> {
    scm.ensure_valid()?;
    if label >= scm.len() {
        return Err(Error::UnknownNode(format!("#{label}")));
    }
    Ok(())
}

/// Best response of the individual with features `x` and the resulting
/// expected shift of the label.
pub fn individual_response(
    scm: &Scm,
    label: usize,
    agent: &AgentModel,
    x: &[f64],
    mc: &McSpec,
) -> Result<(BestResponse, Estimate)> {
    check_label(scm, label)?;
    let features = feature_nodes(scm, label);
    if x.len() != features.len() {
        return Err(Error::DimensionMismatch { expected: features.len(), got: x.len() });
    }
    let br = best_response(&agent.classifier, &agent.cost, x, &agent.actions, &agent.solver)?;
    let iv = adaptation_intervention(&features, x, &br);
    let shift = counterfactual_shift(scm, &event_for(scm, &features, x), &iv, label, mc)?;
    Ok((br, shift))
}

/// `I(f; x)`.
pub fn individual_improvement(
    scm: &Scm,
    label: usize,
    agent: &AgentModel,
    x: &[f64],
    mc: &McConfig,
) -> Result<ImprovementEstimate> {
    mc.check()?;
    let spec = McSpec { n: mc.n_inner, seed: derive_seed(mc.seed, &[1, 0]) };
    let (_, shift) = individual_response(scm, label, agent, x, &spec)?;
    Ok(ImprovementEstimate::from_estimate(shift, mc.alpha))
}

/// `I(f)` over `n_outer` sampled individuals.
pub fn population_improvement(scm: &Scm, label: usize, agent: &AgentModel, mc: &McConfig) -> Result<ImprovementEstimate> {
    population_improvement_traced(scm, label, agent, mc).map(|(e, _)| e)
}

/// Like [`population_improvement`], also returning each sampled individual's
/// features and best response.
pub fn population_improvement_traced(
    scm: &Scm,
    label: usize,
    agent: &AgentModel,
    mc: &McConfig,
) -> Result<(ImprovementEstimate, Vec<(Vec<f64>, BestResponse)>)> {
    mc.check()?;
    check_label(scm, label)?;
    let features = feature_nodes(scm, label);
    let people = sample(scm, mc.n_outer, derive_seed(mc.seed, &[0]))?;
    let results: Vec<(Vec<f64>, BestResponse, Estimate)> = people
        .par_iter()
        .enumerate()
        .map(|(i, (x, _))| {
            let xf: Vec<f64> = features.iter().map(|&k| x[k]).collect();
            let spec = McSpec { n: mc.n_inner, seed: derive_seed(mc.seed, &[1, i as u64]) };
            let (br, shift) = individual_response(scm, label, agent, &xf, &spec)?;
            Ok((xf, br, shift))
        })
        .collect::<Result<_>>()?;
    let estimate = if results.len() == 1 {
        results[0].2
    } else {
        let shifts: Vec<f64> = results.iter().map(|r| r.2.mean).collect();
        Estimate::from_samples(&shifts)
    };
    let trace = results.into_iter().map(|(x, br, _)| (x, br)).collect();
    Ok((ImprovementEstimate::from_estimate(estimate, mc.alpha), trace))
}
