use std::collections::BTreeMap;

use serde::Deserialize;

use crate::agent::{ActionSet, Classifier, CostFunction, ScoreGrid, Solver};
use crate::error::{Error, Result};
use crate::improvement::{feature_nodes, AgentModel, McConfig};
use crate::scm::json::ScmDoc;
use crate::scm::Scm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Simulate,
    Improvement,
    Orient,
    OrientCost,
    SignRecovery,
    CheckAssumption,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Simulate => "simulate",
            Kind::Improvement => "improvement",
            Kind::Orient => "orient",
            Kind::OrientCost => "orient-cost",
            Kind::SignRecovery => "sign-recovery",
            Kind::CheckAssumption => "check-assumption",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClassifierDoc {
    LinearScore {
        weights: BTreeMap<String, f64>,
        #[serde(default)]
        offset: f64,
        #[serde(default)]
        output_bound: Option<f64>,
    },
    Constant {
        value: f64,
    },
    Grid {
        features: Vec<String>,
        lo: Vec<f64>,
        step: Vec<f64>,
        counts: Vec<usize>,
        values: Vec<f64>,
        #[serde(default)]
        output_bound: Option<f64>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CostDoc {
    Quadratic { matrix: Vec<Vec<f64>> },
    Gated { axis: String, penalty: f64 },
    Zero,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ActionsDoc {
    #[default]
    FullSpace,
    CoordinateLine {
        axis: String,
    },
    Finite {
        actions: Vec<Vec<f64>>,
    },
}

/// An experiment description as read from JSON.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub id: String,
    pub kind: Kind,
    pub scm: ScmDoc,
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub classifier: Option<ClassifierDoc>,
    #[serde(default)]
    pub cost: Option<CostDoc>,
    #[serde(default)]
    pub actions: ActionsDoc,
    #[serde(default)]
    pub solver: Option<Solver>,
    #[serde(default)]
    pub mc: McConfig,
    #[serde(default)]
    pub output: Option<String>,
}

/// A scenario with every name resolved against its model.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub scenario: Scenario,
    pub scm: Scm,
    pub label: Option<usize>,
    pub agent: Option<AgentModel>,
}

fn field(kind: Kind, name: &str) -> Error {
    Error::Scenario(format!("field `{name}` is required for kind `{}`", kind.as_str()))
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text)?;
        if s.id.is_empty() || !s.id.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
            return Err(Error::Scenario(format!("field `id` must be a non-empty [A-Za-z0-9_-] name, got {:?}", s.id)));
        }
        s.mc.check().map_err(|e| Error::Scenario(format!("field `mc`: {e}")))?;
        Ok(s)
    }

    /// Builds the model and agent and checks the fields `kind` needs.
    pub fn resolve(self) -> Result<Resolved> {
        let scm = self.scm.to_scm()?;
        scm.ensure_valid()?;
        let label = self.label.as_deref().map(|name| scm.index_of(name)).transpose()?;
        let needs_label = matches!(self.kind, Kind::Improvement | Kind::SignRecovery);
        if needs_label && label.is_none() {
            return Err(field(self.kind, "label"));
        }
        let agent = match self.kind {
            Kind::Improvement => Some(self.agent(&scm, label.expect("checked above"))?),
            _ => None,
        };
        Ok(Resolved { scenario: self, scm, label, agent })
    }

    fn agent(&self, scm: &Scm, label: usize) -> Result<AgentModel> {
        let features = feature_nodes(scm, label);
        let position = |name: &str, what: &str| -> Result<usize> {
            let node = scm.index_of(name)?;
            features
                .iter()
                .position(|&k| k == node)
                .ok_or_else(|| Error::Scenario(format!("field `{what}`: `{name}` is the label, not a feature")))
        };
        let d = features.len();
        let classifier = match self.classifier.as_ref().ok_or_else(|| field(self.kind, "classifier"))? {
            ClassifierDoc::LinearScore { weights, offset, output_bound } => {
                let w = weights
                    .iter()
                    .map(|(name, &w)| Ok((position(name, "classifier.weights")?, w)))
                    .collect::<Result<Vec<_>>>()?;
                with_bound(Classifier::linear(w, *offset), *output_bound)
            }
            ClassifierDoc::Constant { value } => Classifier::constant(*value),
            ClassifierDoc::Grid { features: names, lo, step, counts, values, output_bound } => {
                let k = names.len();
                let cells: usize = counts.iter().product();
                if k == 0
                    || lo.len() != k
                    || step.len() != k
                    || counts.len() != k
                    || counts.contains(&0)
                    || step.iter().any(|s| !(*s > 0.0))
                    || values.len() != cells
                {
                    return Err(Error::Scenario("field `classifier`: inconsistent grid shape".into()));
                }
                let features =
                    names.iter().map(|n| position(n, "classifier.features")).collect::<Result<Vec<_>>>()?;
                let grid = ScoreGrid { features, lo: lo.clone(), step: step.clone(), counts: counts.clone(), values: values.clone() };
                with_bound(Classifier::grid(grid), *output_bound)
            }
        };
        let cost = match self.cost.as_ref().ok_or_else(|| field(self.kind, "cost"))? {
            CostDoc::Quadratic { matrix } => {
                if matrix.len() != d {
                    return Err(Error::Scenario(format!(
                        "field `cost.matrix`: expected {d}x{d} for features {:?}",
                        features.iter().map(|&k| scm.name(k)).collect::<Vec<_>>()
                    )));
                }
                CostFunction::quadratic(matrix).map_err(|e| Error::Scenario(format!("field `cost.matrix`: {e}")))?
            }
            CostDoc::Gated { axis, penalty } => {
                CostFunction::GatedCoordinate { axis: position(axis, "cost.axis")?, penalty: *penalty }
            }
            CostDoc::Zero => CostFunction::Zero,
        };
        let actions = match &self.actions {
            ActionsDoc::FullSpace => ActionSet::FullSpace(d),
            ActionsDoc::CoordinateLine { axis } => ActionSet::CoordinateLine { axis: position(axis, "actions.axis")?, dim: d },
            ActionsDoc::Finite { actions } => {
                if actions.iter().any(|a| a.len() != d) {
                    return Err(Error::Scenario(format!("field `actions.actions`: every action needs {d} entries")));
                }
                ActionSet::finite(actions.clone()).map_err(|e| Error::Scenario(format!("field `actions`: {e}")))?
            }
        };
        let solver = self.solver.unwrap_or(Solver::ClosedForm);
        if let Solver::Grid { resolution, radius } = solver {
            if !(resolution > 0.0 && radius >= 0.0) {
                return Err(Error::Scenario("field `solver`: resolution must be positive and radius non-negative".into()));
            }
        }
        Ok(AgentModel { classifier, cost, actions, solver })
    }
}

fn with_bound(f: Classifier, bound: Option<f64>) -> Classifier {
    match bound {
        Some(b) => f.bounded(b),
        None => f,
    }
}
