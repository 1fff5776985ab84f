use thiserror::Error;

use crate::scm::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph contains a directed cycle")]
    CyclicGraph,

    #[error("invalid model: {}", format_violations(.0))]
    InvalidModel(Vec<Violation>),

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("node `{node}`: value {value} lies outside the tabulated grid")]
    EvaluationDomain { node: String, value: f64 },

    #[error("noise of embedded node `{0}` is needed but cannot be recovered from the observation")]
    NonAdditiveAbduction(String),

    #[error("observation of `{0}` contradicts its point-mass noise")]
    InconsistentEvent(String),

    #[error("conditioning distorts the noise law of `{0}`; only exact abduction is supported")]
    UnsupportedConditioning(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("solver mismatch: {0}")]
    SolverMismatch(String),

    #[error("action is not a member of the action set")]
    ActionNotAllowed,

    #[error("invalid cost function: {0}")]
    InvalidCost(String),

    #[error("no tabulated cost for the requested (features, action) cell")]
    CostUndefined,

    #[error("classifier search exhausted its budget of {0} candidates")]
    BudgetExhausted(usize),

    #[error("edge {0} was oriented as causal but the control assumption does not hold on it")]
    AssumptionViolated(String),

    #[error("feature `{0}` has both sign probes significantly positive")]
    AmbiguousSign(String),

    #[error("skeleton does not match the ground-truth model")]
    SkeletonMismatch,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

impl Error {
    /// True for failures caused by the input document rather than by the model at run time.
    pub fn is_schema_error(&self) -> bool {
        matches!(
            self,
            Error::Scenario(_) | Error::Json(_) | Error::InvalidModel(_) | Error::UnknownNode(_)
        )
    }
}
