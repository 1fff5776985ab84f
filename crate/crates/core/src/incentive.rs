//! Good incentives: finding a classifier that makes best-responding
//! individuals improve their label, and using such an oracle to orient the
//! edges of a causal skeleton.
//!
//! For an edge `{X_i, X_j}` the model is augmented with a frozen copy of
//! `X_i`, `X_j` becomes the label, and every action leaving axis `i` costs
//! `2B`. A classifier can then only reward moving `X_i` toward a target read
//! off the copy, which raises `X_j` exactly when `X_i` causes it.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use rayon::prelude::*;

use crate::agent::{ActionSet, Classifier, CostFunction, ReferenceMap, Solver};
use crate::counterfactual::{counterfactual_shift, ConditioningEvent, Intervention, McSpec};
use crate::error::{Error, Result};
use crate::improvement::{population_improvement_traced, AgentModel, ImprovementEstimate, McConfig, Verdict};
use crate::rng::derive_seed;
use crate::scm::{sample, skeleton_of, Assignment, CausalDag, Composition, NodeSpec, NoiseSpec, Scm, Skeleton, StructuralFunction};
use crate::stats::Estimate;

/// Margin, in standard errors, a control lift must clear.
pub const CONTROL_MARGIN: f64 = 3.0;

#[derive(Debug, Clone)]
pub struct GoodIncentivesInstance {
    pub scm: Scm,
    pub label: usize,
    pub cost: CostFunction,
    pub actions: ActionSet,
    pub solver: Solver,
    pub eps: f64,
    /// `(copy, original)` when one node is a frozen copy of another.
    pub copy: Option<(usize, usize)>,
}

impl GoodIncentivesInstance {
    pub fn check(&self) -> Result<()> {
        self.scm.ensure_valid()?;
        if self.label >= self.scm.len() {
            return Err(Error::UnknownNode(format!("#{}", self.label)));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::Precondition(format!("eps must lie in (0, 1), got {}", self.eps)));
        }
        if self.actions.dim() != self.scm.len() - 1 {
            return Err(Error::DimensionMismatch { expected: self.scm.len() - 1, got: self.actions.dim() });
        }
        Ok(())
    }

    /// Feature position of a non-label node.
    pub fn position(&self, node: usize) -> Option<usize> {
        feature_position(node, self.label)
    }
}

fn feature_position(node: usize, label: usize) -> Option<usize> {
    match node.cmp(&label) {
        std::cmp::Ordering::Less => Some(node),
        std::cmp::Ordering::Equal => None,
        std::cmp::Ordering::Greater => Some(node - 1),
    }
}

/// Instance for edge `{X_i, X_j}` with its augmented model.
#[derive(Debug, Clone)]
pub struct AugmentedInstance {
    pub base_edge: (usize, usize),
    pub copy_node: usize,
    pub instance: GoodIncentivesInstance,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlGrid {
    /// Intervention values, evenly spaced on `[-B, B]`.
    pub candidates: usize,
    pub cells_per_dim: usize,
    /// Individuals used to fit the table, and again to evaluate it.
    pub mesh_size: usize,
    /// Monte Carlo draws for lifts that are not exact.
    pub n_inner: usize,
    pub seed: u64,
}

impl Default for ControlGrid {
    fn default() -> Self {
        ControlGrid { candidates: 64, cells_per_dim: 32, mesh_size: 400, n_inner: 200, seed: 0 }
    }
}

impl ControlGrid {
    fn check(&self) -> Result<()> {
        if self.candidates < 2 || self.cells_per_dim == 0 || self.mesh_size < 2 || self.n_inner == 0 {
            return Err(Error::Precondition("control grid sizes too small".into()));
        }
        Ok(())
    }

    pub fn values(&self, bound: f64) -> Vec<f64> {
        let step = 2.0 * bound / (self.candidates - 1) as f64;
        (0..self.candidates).map(|k| -bound + k as f64 * step).collect()
    }

    pub fn resolution(&self, bound: f64) -> f64 {
        2.0 * bound / (self.candidates - 1) as f64
    }
}

/// A tabulated intervention rule `h(u_A)` for edge `(V, W)`, where `u_A` is
/// the recovered noise of the ancestors of `W` reachable without `V`.
#[derive(Debug)]
pub struct ControlFunction {
    pub edge: (usize, usize),
    pub ancestors: Vec<usize>,
    pub candidates: Vec<f64>,
    pub table: BTreeMap<Vec<i64>, f64>,
    /// Mean lift of `W` under `V := h`, estimated on individuals not used to fit `h`.
    pub lift: Estimate,
    scm: Scm,
    lo: Vec<f64>,
    step: Vec<f64>,
    cells: usize,
    memo: RwLock<HashMap<Vec<i64>, f64>>,
}

impl ControlFunction {
    /// The lift clears the margin.
    pub fn holds(&self) -> bool {
        self.lift.mean > 0.0 && self.lift.mean > CONTROL_MARGIN * self.lift.std_error
    }

    /// Recovers `u_A` from node values supplied by `value`.
    pub fn recover(&self, value: impl Fn(usize) -> f64) -> Result<Vec<f64>> {
        let mut values = vec![f64::NAN; self.scm.len()];
        for &a in &self.ancestors {
            values[a] = value(a);
            for &p in self.scm.dag().parents(a) {
                values[p] = value(p);
            }
        }
        self.ancestors.iter().map(|&a| Ok(values[a] - self.scm.equation_value(a, &values, 0.0)?)).collect()
    }

    fn cell(&self, u: &[f64]) -> Vec<i64> {
        u.iter()
            .zip(self.lo.iter().zip(&self.step))
            .map(|(&u, (&lo, &step))| (((u - lo) / step).floor() as i64).clamp(0, self.cells as i64 - 1))
            .collect()
    }

    /// `h(u_A)`. Cells never seen while fitting take the value of the nearest
    /// fitted cell in the max norm.
    pub fn value_at(&self, u: &[f64]) -> f64 {
        let key = self.cell(u);
        if let Some(&v) = self.table.get(&key) {
            return v;
        }
        if let Some(&v) = self.memo.read().expect("memo lock").get(&key) {
            return v;
        }
        let mut best = (i64::MAX, f64::NAN);
        for (k, &v) in &self.table {
            let d = k.iter().zip(&key).map(|(a, b)| (a - b).abs()).max().unwrap_or(0);
            if d < best.0 {
                best = (d, v);
            }
        }
        self.memo.write().expect("memo lock").insert(key, best.1);
        best.1
    }

    pub fn value_for(&self, x: &Assignment) -> Result<f64> {
        Ok(self.value_at(&self.recover(|k| x[k])?))
    }
}

/// [`ControlFunction`] read from feature vectors of an augmented instance,
/// taking `V` from its copy so that moving `V` itself never moves the target.
#[derive(Debug)]
pub struct CopyReference {
    pub control: Arc<ControlFunction>,
    /// Feature position of each node the control function reads.
    pub positions: BTreeMap<usize, usize>,
}

impl ReferenceMap for CopyReference {
    fn value(&self, x: &[f64]) -> Result<f64> {
        let u = self.control.recover(|k| self.positions.get(&k).map_or(f64::NAN, |&p| x[p]))?;
        Ok(self.control.value_at(&u))
    }

    fn reads(&self) -> Vec<usize> {
        self.positions.values().copied().collect()
    }
}

fn check_edge(scm: &Scm, (v, w): (usize, usize)) -> Result<()> {
    scm.ensure_valid()?;
    for k in [v, w] {
        if k >= scm.len() {
            return Err(Error::UnknownNode(format!("#{k}")));
        }
    }
    if v == w {
        return Err(Error::Precondition("edge endpoints must differ".into()));
    }
    Ok(())
}

/// Lift of `W` for one individual when `V := value`.
fn lift_at(scm: &Scm, x: &Assignment, (v, w): (usize, usize), value: f64, mc: &McSpec) -> Result<f64> {
    let event = ConditioningEvent::all_but(x, w);
    let iv = Intervention::new().set(v, value);
    Ok(counterfactual_shift(scm, &event, &iv, w, mc)?.mean)
}

/// Fits `h` on one sample of individuals and measures its lift on another.
pub fn fit_control_function(scm: &Scm, edge: (usize, usize), grid: &ControlGrid) -> Result<ControlFunction> {
    check_edge(scm, edge)?;
    grid.check()?;
    let (v, w) = edge;
    let mask = scm.dag().ancestors_avoiding(w, v);
    let ancestors: Vec<usize> = (0..scm.len()).filter(|&k| mask[k] && k != w).collect();
    if let Some(&a) = ancestors.iter().find(|&&a| scm.node(a).composition == Composition::Embedded) {
        return Err(Error::NonAdditiveAbduction(scm.name(a).to_string()));
    }
    let candidates = grid.values(scm.support_bound());
    let mut control = ControlFunction {
        edge,
        ancestors,
        candidates,
        table: BTreeMap::new(),
        lift: Estimate::exact(0.0),
        scm: scm.clone(),
        lo: vec![],
        step: vec![],
        cells: grid.cells_per_dim,
        memo: RwLock::new(HashMap::new()),
    };

    // Fit: average lifts per cell and candidate, keep the argmax.
    let fit_seed = derive_seed(grid.seed, &[0]);
    let mesh = sample(scm, grid.mesh_size, derive_seed(fit_seed, &[0]))?;
    let us: Vec<Vec<f64>> = mesh.iter().map(|(x, _)| control.recover(|k| x[k])).collect::<Result<_>>()?;
    let dims = control.ancestors.len();
    control.lo = (0..dims).map(|d| us.iter().map(|u| u[d]).fold(f64::INFINITY, f64::min)).collect();
    control.step = (0..dims)
        .map(|d| {
            let hi = us.iter().map(|u| u[d]).fold(f64::NEG_INFINITY, f64::max);
            let span = hi - control.lo[d];
            if span > 0.0 {
                span / grid.cells_per_dim as f64
            } else {
                1.0
            }
        })
        .collect();
    let lifts: Vec<Vec<f64>> = mesh
        .par_iter()
        .enumerate()
        .map(|(m, (x, _))| {
            control
                .candidates
                .iter()
                .enumerate()
                .map(|(c, &value)| {
                    let mc = McSpec { n: grid.n_inner, seed: derive_seed(fit_seed, &[1, m as u64, c as u64]) };
                    lift_at(scm, x, edge, value, &mc)
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut sums: BTreeMap<Vec<i64>, Vec<f64>> = BTreeMap::new();
    for (u, row) in us.iter().zip(&lifts) {
        let acc = sums.entry(control.cell(u)).or_insert_with(|| vec![0.0; row.len()]);
        for (a, l) in acc.iter_mut().zip(row) {
            *a += l;
        }
    }
    for (key, acc) in sums {
        let mut best = 0;
        for c in 1..acc.len() {
            if acc[c] > acc[best] {
                best = c;
            }
        }
        control.table.insert(key, control.candidates[best]);
    }

    // Evaluate on fresh individuals.
    let eval_seed = derive_seed(grid.seed, &[1]);
    let fresh = sample(scm, grid.mesh_size, derive_seed(eval_seed, &[0]))?;
    let gains: Vec<f64> = fresh
        .par_iter()
        .enumerate()
        .map(|(m, (x, _))| {
            let mc = McSpec { n: grid.n_inner, seed: derive_seed(eval_seed, &[1, m as u64]) };
            lift_at(scm, x, edge, control.value_for(x)?, &mc)
        })
        .collect::<Result<_>>()?;
    control.lift = Estimate::from_samples(&gains);
    Ok(control)
}

/// `Some(h)` when some intervention rule on `V` raises `W` on average.
pub fn construct_control_function(
    scm: &Scm,
    edge: (usize, usize),
    grid: &ControlGrid,
) -> Result<Option<ControlFunction>> {
    let control = fit_control_function(scm, edge, grid)?;
    Ok(control.holds().then_some(control))
}

#[derive(Debug, Clone)]
pub struct ControlCheck {
    pub holds: bool,
    pub lift: Estimate,
    pub witness: Option<Arc<ControlFunction>>,
}

pub fn check_control_assumption(scm: &Scm, edge: (usize, usize), grid: &ControlGrid) -> Result<ControlCheck> {
    let control = fit_control_function(scm, edge, grid)?;
    let holds = control.holds();
    Ok(ControlCheck { holds, lift: control.lift, witness: holds.then(|| Arc::new(control)) })
}

/// Appends a copy `X~ := X_i` and makes `X_j` the label; actions off axis `i`
/// cost `2B`.
pub fn build_augmented_instance(scm: &Scm, edge: (usize, usize), eps: f64) -> Result<AugmentedInstance> {
    check_edge(scm, edge)?;
    let (i, j) = edge;
    if !scm.dag().has_edge(i, j) && !scm.dag().has_edge(j, i) {
        return Err(Error::Precondition(format!("{} and {} are not adjacent", scm.name(i), scm.name(j))));
    }
    let n = scm.len();
    let bound = scm.support_bound();
    let mut names: Vec<String> = scm.dag().nodes().iter().map(|id| id.name.clone()).collect();
    names.push(format!("{}~copy", scm.name(i)));
    let edges = scm.dag().edges().iter().copied().chain([(i, n)]);
    let mut nodes = scm.nodes().to_vec();
    nodes.push(NodeSpec::additive(StructuralFunction::linear([(i, 1.0)], 0.0), NoiseSpec::PointMass { value: 0.0 }));
    let aug = Scm::new(CausalDag::new(names, edges), nodes, Some(bound));
    aug.ensure_valid()?;
    let axis = feature_position(i, j).expect("endpoints differ");
    let res = ControlGrid::default().resolution(bound);
    let instance = GoodIncentivesInstance {
        scm: aug,
        label: j,
        cost: CostFunction::GatedCoordinate { axis, penalty: 2.0 * bound },
        actions: ActionSet::FullSpace(n),
        solver: Solver::Grid { resolution: res, radius: 2.0 * bound + res },
        eps,
        copy: Some((n, i)),
    };
    instance.check()?;
    Ok(AugmentedInstance { base_edge: edge, copy_node: n, instance })
}

/// Linear scores with every weight vector from `weights^d` except zero.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFamily {
    pub weights: Vec<f64>,
    pub output_bound: Option<f64>,
}

impl LinearFamily {
    fn members(&self, dim: usize) -> impl Iterator<Item = Classifier> + '_ {
        let k = self.weights.len();
        let total = k.checked_pow(dim as u32).unwrap_or(usize::MAX);
        (0..total).filter_map(move |mut idx| {
            let mut w = Vec::with_capacity(dim);
            for _ in 0..dim {
                w.push(self.weights[idx % k]);
                idx /= k;
            }
            if w.iter().all(|&v| v == 0.0) {
                return None;
            }
            let f = Classifier::linear(w.into_iter().enumerate().filter(|(_, v)| *v != 0.0), 0.0);
            Some(match self.output_bound {
                Some(b) => f.bounded(b),
                None => f,
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    /// Indicator classifier built from a control function; needs a gated cost
    /// and a copy node.
    Constructive(ControlGrid),
    /// Certify family members in order until one passes.
    Search { family: LinearFamily, budget: usize },
}

#[derive(Debug, Clone)]
pub enum OracleOutcome {
    Classifier(Classifier),
    Fail,
}

#[derive(Debug, Clone)]
pub struct OracleAnswer {
    pub outcome: OracleOutcome,
    pub certificate: Option<ImprovementEstimate>,
    /// Control function behind a constructive answer.
    pub witness: Option<Arc<ControlFunction>>,
    /// Best responses that left the gated axis while certifying.
    pub off_axis_actions: usize,
}

impl OracleAnswer {
    fn fail() -> Self {
        OracleAnswer { outcome: OracleOutcome::Fail, certificate: None, witness: None, off_axis_actions: 0 }
    }

    pub fn is_classifier(&self) -> bool {
        matches!(self.outcome, OracleOutcome::Classifier(_))
    }
}

fn certify(inst: &GoodIncentivesInstance, f: &Classifier, mc: &McConfig) -> Result<(ImprovementEstimate, usize)> {
    let agent = AgentModel { classifier: f.clone(), cost: inst.cost.clone(), actions: inst.actions.clone(), solver: inst.solver };
    let (estimate, trace) = population_improvement_traced(&inst.scm, inst.label, &agent, mc)?;
    let off_axis = match inst.cost {
        CostFunction::GatedCoordinate { axis, .. } => {
            trace.iter().filter(|(_, br)| br.action.iter().enumerate().any(|(k, &a)| k != axis && a != 0.0)).count()
        }
        _ => 0,
    };
    Ok((estimate, off_axis))
}

/// Indicator classifier `1{|x_i - h(copy)| <= tol}` for an augmented instance.
pub fn indicator_classifier(inst: &GoodIncentivesInstance, control: Arc<ControlFunction>) -> Result<Classifier> {
    let Some((copy, original)) = inst.copy else {
        return Err(Error::Precondition("instance has no copy node".into()));
    };
    let mut positions = BTreeMap::new();
    for &a in &control.ancestors {
        for k in std::iter::once(a).chain(inst.scm.dag().parents(a).iter().copied()) {
            let node = if k == original { copy } else { k };
            let p = inst.position(node).ok_or_else(|| Error::Precondition("control function reads the label".into()))?;
            positions.insert(k, p);
        }
    }
    let axis = inst.position(original).ok_or_else(|| Error::Precondition("copied node is the label".into()))?;
    let bound = inst.scm.support_bound();
    let resolution = match inst.solver {
        Solver::Grid { resolution, .. } => resolution,
        Solver::ClosedForm => ControlGrid::default().resolution(bound),
    };
    let tolerance = 0.5 * resolution * (1.0 + 1e-9);
    let reference = CopyReference { control, positions };
    Ok(Classifier::indicator_match(axis, Arc::new(reference), tolerance).bounded(bound))
}

pub fn good_incentives_oracle(inst: &GoodIncentivesInstance, strategy: &Strategy, mc: &McConfig) -> Result<OracleAnswer> {
    inst.check()?;
    mc.check()?;
    match strategy {
        Strategy::Constructive(grid) => {
            let (CostFunction::GatedCoordinate { .. }, Some((_, original))) = (&inst.cost, inst.copy) else {
                return Ok(OracleAnswer::fail());
            };
            let Some(control) = construct_control_function(&inst.scm, (original, inst.label), grid)? else {
                return Ok(OracleAnswer::fail());
            };
            let control = Arc::new(control);
            let f = indicator_classifier(inst, control.clone())?;
            let (certificate, off_axis_actions) = certify(inst, &f, mc)?;
            if certificate.verdict != Verdict::Improvement {
                return Ok(OracleAnswer { certificate: Some(certificate), off_axis_actions, ..OracleAnswer::fail() });
            }
            Ok(OracleAnswer {
                outcome: OracleOutcome::Classifier(f),
                certificate: Some(certificate),
                witness: Some(control),
                off_axis_actions,
            })
        }
        Strategy::Search { family, budget } => {
            let mut tried = 0;
            for f in family.members(inst.actions.dim()) {
                if tried == *budget {
                    return Err(Error::BudgetExhausted(*budget));
                }
                tried += 1;
                let (certificate, off_axis_actions) = certify(inst, &f, mc)?;
                if certificate.verdict == Verdict::Improvement {
                    return Ok(OracleAnswer {
                        outcome: OracleOutcome::Classifier(f),
                        certificate: Some(certificate),
                        witness: None,
                        off_axis_actions,
                    });
                }
            }
            Ok(OracleAnswer::fail())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionConfig {
    pub eps: f64,
    pub grid: ControlGrid,
    pub certificate: McConfig,
    pub seed: u64,
}

impl Default for ReductionConfig {
    fn default() -> Self {
        ReductionConfig {
            eps: 0.5,
            grid: ControlGrid::default(),
            certificate: McConfig { n_outer: 1000, ..McConfig::default() },
            seed: 0,
        }
    }
}

impl ReductionConfig {
    /// Per-edge configuration, seeded from `(seed, i, j)`.
    pub fn for_edge(&self, (i, j): (usize, usize)) -> (ControlGrid, McConfig) {
        let s = derive_seed(self.seed, &[i as u64, j as u64]);
        (
            ControlGrid { seed: derive_seed(s, &[0]), ..self.grid },
            McConfig { seed: derive_seed(s, &[1]), ..self.certificate },
        )
    }
}

#[derive(Debug, Clone)]
pub struct TranscriptEntry {
    /// `(i, j)` with `i < j`.
    pub edge: (usize, usize),
    /// Oriented `(from, to)`.
    pub direction: (usize, usize),
    pub classifier_found: bool,
    pub certificate: Option<ImprovementEstimate>,
    pub n_calls: usize,
    pub off_axis_actions: usize,
}

#[derive(Debug, Clone)]
pub struct OrientationResult {
    pub oriented: CausalDag,
    pub transcript: Vec<TranscriptEntry>,
}

impl OrientationResult {
    pub fn n_calls(&self) -> usize {
        self.transcript.iter().map(|t| t.n_calls).sum()
    }

    /// True when every edge points the same way as in `truth`.
    pub fn matches(&self, truth: &CausalDag) -> bool {
        self.oriented.edges() == truth.edges()
    }
}

pub(crate) fn check_skeleton(skeleton: &Skeleton, scm: &Scm) -> Result<()> {
    scm.ensure_valid()?;
    let truth = skeleton_of(scm.dag());
    if truth.undirected_edges != skeleton.undirected_edges || skeleton.nodes.len() != scm.len() {
        return Err(Error::SkeletonMismatch);
    }
    Ok(())
}

/// One constructive oracle call per skeleton edge: a classifier means
/// `i -> j`, a failure means `j -> i`.
pub fn orient_edges(skeleton: &Skeleton, truth: &Scm, config: &ReductionConfig) -> Result<OrientationResult> {
    check_skeleton(skeleton, truth)?;
    let edges: Vec<(usize, usize)> = skeleton.undirected_edges.iter().copied().collect();
    let transcript: Vec<TranscriptEntry> = edges
        .par_iter()
        .map(|&(i, j)| {
            let (grid, mc) = config.for_edge((i, j));
            let aug = build_augmented_instance(truth, (i, j), config.eps)?;
            let answer = good_incentives_oracle(&aug.instance, &Strategy::Constructive(grid), &mc)?;
            if answer.is_classifier() {
                let consistent = match &answer.witness {
                    Some(w) => w.holds(),
                    None => check_control_assumption(truth, (i, j), &grid)?.holds,
                };
                if !consistent {
                    return Err(Error::AssumptionViolated(format!("{} -> {}", truth.name(i), truth.name(j))));
                }
            }
            let found = answer.is_classifier();
            Ok(TranscriptEntry {
                edge: (i, j),
                direction: if found { (i, j) } else { (j, i) },
                classifier_found: found,
                certificate: answer.certificate,
                n_calls: 1,
                off_axis_actions: answer.off_axis_actions,
            })
        })
        .collect::<Result<_>>()?;
    let oriented = truth.dag().with_edges(transcript.iter().map(|t| t.direction));
    Ok(OrientationResult { oriented, transcript })
}
