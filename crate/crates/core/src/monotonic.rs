//! Outcome-monotonic costs: an action costs exactly as much as it is
//! expected to raise the label, and nothing when it does not raise it.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::RwLock;

use rayon::prelude::*;

use crate::agent::{ActionSet, CostFunction, TabularCost};
use crate::counterfactual::{counterfactual_shift, ConditioningEvent, Intervention, McSpec};
use crate::error::{Error, Result};
use crate::improvement::{feature_nodes, ImprovementEstimate};
use crate::incentive::{check_control_assumption, check_skeleton, ControlGrid, OrientationResult, TranscriptEntry};
use crate::rng::derive_seed;
use crate::scm::{sample, Scm, Skeleton};
use crate::stats::{z_one_sided, Estimate};

/// Rounding for cache keys.
pub const CACHE_RESOLUTION: f64 = 1e-6;

/// Default significance margin, in standard errors, for a positive cost.
pub const COST_MARGIN: f64 = 3.0;

/// `E[Y_{X:=x+a}({X=x})] - E[Y | X=x]`, computed as a paired shift.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDelta {
    pub x: Vec<f64>,
    pub a: Vec<f64>,
    pub delta: f64,
    pub std_error: f64,
}

fn cell_key(v: &[f64]) -> Vec<i64> {
    v.iter().map(|x| (x / CACHE_RESOLUTION).round() as i64).collect()
}

pub fn outcome_delta(scm: &Scm, label: usize, x: &[f64], a: &[f64], mc: &McSpec) -> Result<OutcomeDelta> {
    scm.ensure_valid()?;
    if label >= scm.len() {
        return Err(Error::UnknownNode(format!("#{label}")));
    }
    let features = feature_nodes(scm, label);
    for v in [x, a] {
        if v.len() != features.len() {
            return Err(Error::DimensionMismatch { expected: features.len(), got: v.len() });
        }
    }
    let event = ConditioningEvent::partial(scm.len(), features.iter().copied().zip(x.iter().copied()));
    let iv = Intervention::from_pairs(
        features.iter().zip(x.iter().zip(a)).filter(|(_, (_, &a))| a != 0.0).map(|(&k, (&x, &a))| (k, x + a)),
    );
    let e = counterfactual_shift(scm, &event, &iv, label, mc)?;
    Ok(OutcomeDelta { x: x.to_vec(), a: a.to_vec(), delta: e.mean, std_error: e.std_error })
}

/// Lazy cost `c(a; x) = delta` when `delta` is significantly positive, else 0.
/// Every call to [`MonotonicCost::cost`] is counted.
#[derive(Debug)]
pub struct MonotonicCost {
    pub scm: Scm,
    pub label: usize,
    pub actions: ActionSet,
    pub mc: McSpec,
    /// Standard errors a delta must clear to count as positive.
    pub margin: f64,
    cache: RwLock<HashMap<(Vec<i64>, Vec<i64>), OutcomeDelta>>,
    evaluations: AtomicUsize,
}

pub fn build_outcome_monotonic_cost(scm: &Scm, label: usize, actions: ActionSet, mc: McSpec) -> Result<MonotonicCost> {
    scm.ensure_valid()?;
    if label >= scm.len() {
        return Err(Error::UnknownNode(format!("#{label}")));
    }
    if actions.dim() != scm.len() - 1 {
        return Err(Error::DimensionMismatch { expected: scm.len() - 1, got: actions.dim() });
    }
    Ok(MonotonicCost {
        scm: scm.clone(),
        label,
        actions,
        mc,
        margin: COST_MARGIN,
        cache: RwLock::new(HashMap::new()),
        evaluations: AtomicUsize::new(0),
    })
}

impl MonotonicCost {
    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = margin;
        self
    }

    /// Cached delta. The Monte Carlo seed depends only on the cache key, so
    /// a repeated or concurrent computation yields the same value.
    pub fn delta(&self, a: &[f64], x: &[f64]) -> Result<OutcomeDelta> {
        let key = (cell_key(x), cell_key(a));
        if let Some(d) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(d.clone());
        }
        let tags: Vec<u64> = key.0.iter().chain(&key.1).map(|&k| k as u64).collect();
        let mc = McSpec { n: self.mc.n, seed: derive_seed(self.mc.seed, &tags) };
        let d = outcome_delta(&self.scm, self.label, x, a, &mc)?;
        self.cache.write().expect("cache lock").entry(key).or_insert_with(|| d.clone());
        Ok(d)
    }

    pub fn cost(&self, a: &[f64], x: &[f64]) -> Result<f64> {
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        if !self.actions.contains(a) {
            return Err(Error::ActionNotAllowed);
        }
        let d = self.delta(a, x)?;
        Ok(if d.delta > self.margin * d.std_error + 1e-12 { d.delta } else { 0.0 })
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations.load(Ordering::Relaxed)
    }

    /// Freezes the cost on a list of `(a, x)` probes.
    pub fn tabulate(&self, probes: &[(Vec<f64>, Vec<f64>)]) -> Result<CostFunction> {
        let mut table = TabularCost::new(CACHE_RESOLUTION);
        for (a, x) in probes {
            table.insert(x, a, self.cost(a, x)?);
        }
        Ok(CostFunction::TabularOutcome(table))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeConfig {
    pub mesh_points: usize,
    /// Action magnitudes, evenly spaced on `[-B, B]`.
    pub alphas: usize,
    pub n_inner: usize,
    pub alpha: f64,
    pub seed: u64,
    /// Re-derive the control assumption for edges found causal.
    pub verify_assumption: bool,
    pub grid: ControlGrid,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            mesh_points: 9,
            alphas: 17,
            n_inner: 200,
            alpha: 0.01,
            seed: 0,
            verify_assumption: false,
            grid: ControlGrid::default(),
        }
    }
}

impl ProbeConfig {
    /// Per-probe margin with a Bonferroni correction, never below the default.
    pub fn margin(&self) -> f64 {
        let k = (self.mesh_points * self.alphas).max(1) as f64;
        COST_MARGIN.max(z_one_sided(self.alpha / k))
    }
}

/// One cost oracle per skeleton edge, probed along `X_i`'s axis: any
/// positive cost means `i -> j`, all zero means `j -> i`.
pub fn orient_edges_via_cost(skeleton: &Skeleton, truth: &Scm, probe: &ProbeConfig) -> Result<OrientationResult> {
    check_skeleton(skeleton, truth)?;
    if probe.mesh_points == 0 || probe.alphas < 2 || probe.n_inner == 0 {
        return Err(Error::Precondition("probe grid too small".into()));
    }
    let bound = truth.support_bound();
    let alphas: Vec<f64> = (0..probe.alphas)
        .map(|k| -bound + 2.0 * bound * k as f64 / (probe.alphas - 1) as f64)
        .filter(|&a| a != 0.0)
        .collect();
    let edges: Vec<(usize, usize)> = skeleton.undirected_edges.iter().copied().collect();
    let transcript: Vec<TranscriptEntry> = edges
        .par_iter()
        .map(|&(i, j)| {
            let seed = derive_seed(probe.seed, &[i as u64, j as u64]);
            let dim = truth.len() - 1;
            let axis = if i < j { i } else { i - 1 };
            let cost = build_outcome_monotonic_cost(
                truth,
                j,
                ActionSet::CoordinateLine { axis, dim },
                McSpec { n: probe.n_inner, seed: derive_seed(seed, &[1]) },
            )?
            .with_margin(probe.margin());
            let features = feature_nodes(truth, j);
            let mesh = sample(truth, probe.mesh_points, derive_seed(seed, &[0]))?;
            let mut best: Option<OutcomeDelta> = None;
            let mut positive = false;
            for (x, _) in &mesh {
                let xf: Vec<f64> = features.iter().map(|&k| x[k]).collect();
                for &alpha in &alphas {
                    let mut a = vec![0.0; dim];
                    a[axis] = alpha;
                    positive |= cost.cost(&a, &xf)? > 0.0;
                    let d = cost.delta(&a, &xf)?;
                    if best.as_ref().is_none_or(|b| d.delta > b.delta) {
                        best = Some(d);
                    }
                }
            }
            if positive && probe.verify_assumption {
                let grid = ControlGrid { seed: derive_seed(seed, &[2]), ..probe.grid };
                if !check_control_assumption(truth, (i, j), &grid)?.holds {
                    return Err(Error::AssumptionViolated(format!("{} -> {}", truth.name(i), truth.name(j))));
                }
            }
            let certificate = best.map(|d| {
                ImprovementEstimate::from_estimate(
                    Estimate { mean: d.delta, std_error: d.std_error, n: probe.n_inner },
                    probe.alpha,
                )
            });
            Ok(TranscriptEntry {
                edge: (i, j),
                direction: if positive { (i, j) } else { (j, i) },
                classifier_found: positive,
                certificate,
                n_calls: 1,
                off_axis_actions: 0,
            })
        })
        .collect::<Result<_>>()?;
    let oriented = truth.dag().with_edges(transcript.iter().map(|t| t.direction));
    Ok(OrientationResult { oriented, transcript })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSign {
    pub node: usize,
    pub name: String,
    pub causal: bool,
    /// +1, -1, or 0 for non-causal features.
    pub sign: i8,
    pub probe_plus: f64,
    pub probe_minus: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignRecoveryResult {
    pub features: Vec<FeatureSign>,
    pub query_count: usize,
}

/// Probes `c(e_k; 0)` and `c(-e_k; 0)` for every feature.
pub fn linear_sign_recovery(cost: &MonotonicCost) -> Result<SignRecoveryResult> {
    let ActionSet::FullSpace(dim) = cost.actions else {
        return Err(Error::Precondition("sign recovery needs a cost over the full action space".into()));
    };
    let before = cost.evaluations();
    let zero = vec![0.0; dim];
    let mut features = Vec::with_capacity(dim);
    for (k, node) in feature_nodes(&cost.scm, cost.label).into_iter().enumerate() {
        let mut e = zero.clone();
        e[k] = 1.0;
        let plus = cost.cost(&e, &zero)?;
        e[k] = -1.0;
        let minus = cost.cost(&e, &zero)?;
        let name = cost.scm.name(node).to_string();
        if plus > 0.0 && minus > 0.0 {
            return Err(Error::AmbiguousSign(name));
        }
        let sign = if plus > 0.0 {
            1
        } else if minus > 0.0 {
            -1
        } else {
            0
        };
        features.push(FeatureSign { node, name, causal: sign != 0, sign, probe_plus: plus, probe_minus: minus });
    }
    Ok(SignRecoveryResult { features, query_count: cost.evaluations() - before })
}
