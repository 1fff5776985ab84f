use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Deserialize;

use super::{content_hash, header, table, Artifact};
use crate::error::{Error, Result};
use crate::incentive::{orient_edges, ReductionConfig};
use crate::monotonic::{orient_edges_via_cost, ProbeConfig};
use crate::rng::derive_seed;
use crate::scm::{random_anm, skeleton_of, AnmSpec};

/// Orientation benchmark over random linear-Gaussian models.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub n_trials: usize,
    #[serde(default = "default_node_range")]
    pub node_range: (usize, usize),
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_edge_probability")]
    pub edge_probability: f64,
    #[serde(default = "default_weight_range")]
    pub weight_range: (f64, f64),
}

fn default_node_range() -> (usize, usize) {
    (4, 6)
}

fn default_edge_probability() -> f64 {
    0.5
}

fn default_weight_range() -> (f64, f64) {
    (0.5, 2.0)
}

impl BenchConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: BenchConfig = serde_json::from_str(text)?;
        let (lo, hi) = c.node_range;
        if lo < 2 || hi < lo {
            return Err(Error::Scenario(format!("field `node_range`: need 2 <= lo <= hi, got [{lo}, {hi}]")));
        }
        if !(0.0..=1.0).contains(&c.edge_probability) {
            return Err(Error::Scenario("field `edge_probability` must lie in [0, 1]".into()));
        }
        let (wl, wh) = c.weight_range;
        if !(wl > 0.0 && wh >= wl && wh.is_finite()) {
            return Err(Error::Scenario("field `weight_range`: need 0 < lo <= hi".into()));
        }
        Ok(c)
    }

    /// Model specification for trial `t`.
    pub fn trial_spec(&self, t: usize) -> AnmSpec {
        let (lo, hi) = self.node_range;
        let span = (hi - lo + 1) as u64;
        AnmSpec {
            n_nodes: lo + (derive_seed(self.seed, &[t as u64, 0]) % span) as usize,
            edge_probability: self.edge_probability,
            weight_range: self.weight_range,
            seed: derive_seed(self.seed, &[t as u64, 1]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub trial: usize,
    pub n_nodes: usize,
    pub n_edges: usize,
    pub incentive_correct: bool,
    pub incentive_calls: usize,
    pub cost_correct: bool,
    pub cost_calls: usize,
    pub agree: bool,
}

pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRow>> {
    (0..config.n_trials)
        .into_par_iter()
        .map(|t| {
            let spec = config.trial_spec(t);
            let scm = random_anm(&spec);
            let skeleton = skeleton_of(scm.dag());
            let seed = derive_seed(config.seed, &[t as u64, 2]);
            let by_incentive = orient_edges(&skeleton, &scm, &ReductionConfig { seed, ..ReductionConfig::default() })?;
            let by_cost = orient_edges_via_cost(&skeleton, &scm, &ProbeConfig { seed, ..ProbeConfig::default() })?;
            Ok(BenchRow {
                trial: t,
                n_nodes: scm.len(),
                n_edges: skeleton.len(),
                incentive_correct: by_incentive.matches(scm.dag()),
                incentive_calls: by_incentive.n_calls(),
                cost_correct: by_cost.matches(scm.dag()),
                cost_calls: by_cost.n_calls(),
                agree: by_incentive.oriented.edges() == by_cost.oriented.edges(),
            })
        })
        .collect()
}

/// Runs the benchmark described by `text`; `seed` overrides the file's.
pub fn bench(text: &str, seed: Option<u64>) -> Result<Artifact> {
    let mut config = BenchConfig::from_json(text)?;
    if let Some(s) = seed {
        config.seed = s;
    }
    let rows = run_bench(&config)?;
    let count = |f: fn(&BenchRow) -> bool| rows.iter().filter(|r| f(r)).count();
    let totals = format!(
        "# totals trials={} incentive_correct={} cost_correct={} agree={}\n",
        rows.len(),
        count(|r| r.incentive_correct),
        count(|r| r.cost_correct),
        count(|r| r.agree)
    );
    let records: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.trial.to_string(),
                r.n_nodes.to_string(),
                r.n_edges.to_string(),
                r.incentive_correct.to_string(),
                r.incentive_calls.to_string(),
                r.cost_correct.to_string(),
                r.cost_calls.to_string(),
                r.agree.to_string(),
            ]
        })
        .collect();
    let mut csv = table(
        &header(config.seed, &content_hash(text.as_bytes()), ""),
        &records,
        &["trial", "n_nodes", "n_edges", "incentive_correct", "incentive_calls", "cost_correct", "cost_calls", "agree"],
    )?;
    csv.push_str(&totals);
    let mut summary = String::from("bench\n");
    for r in &records {
        let _ = writeln!(
            summary,
            "trial {}: nodes {} edges {} incentive {} ({} calls) cost {} ({} calls) agree {}",
            r[0], r[1], r[2], r[3], r[4], r[5], r[6], r[7]
        );
    }
    summary.push_str(totals.trim_start_matches("# "));
    Ok(Artifact { stem: "bench".into(), csv, summary })
}
