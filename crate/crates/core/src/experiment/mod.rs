//! Scenario files in, CSV tables and plain-text summaries out.
//!
//! Every table starts with a `#` line naming the tool version, the seed and
//! a hash of the input file. All results are computed before anything is
//! written, so a failing run leaves no files behind.

mod bench;
mod scenario;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

pub use bench::{bench, run_bench, BenchConfig, BenchRow};
pub use scenario::{ActionsDoc, ClassifierDoc, CostDoc, Kind, Resolved, Scenario};

use crate::counterfactual::McSpec;
use crate::error::{Error, Result};
use crate::improvement::population_improvement;
use crate::incentive::{check_control_assumption, orient_edges, ControlGrid, OrientationResult, ReductionConfig};
use crate::monotonic::{build_outcome_monotonic_cost, linear_sign_recovery, orient_edges_via_cost, ProbeConfig};
use crate::agent::ActionSet;
use crate::rng::derive_seed;
use crate::scm::{sample, skeleton_of};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A finished table, ready to be written.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub stem: String,
    pub csv: String,
    pub summary: String,
}

impl Artifact {
    /// Writes `<stem>.csv` and `<stem>.summary.txt` under `dir`.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        fs::create_dir_all(dir)?;
        let csv = dir.join(format!("{}.csv", self.stem));
        let summary = dir.join(format!("{}.summary.txt", self.stem));
        fs::write(&csv, &self.csv)?;
        fs::write(&summary, &self.summary)?;
        Ok((csv, summary))
    }
}

/// First 16 hex digits of the SHA-256 of `bytes`.
pub fn content_hash(bytes: &[u8]) -> String {
    hex::encode(&Sha256::digest(bytes)[..8])
}

pub(crate) fn header(seed: u64, hash: &str, extra: &str) -> String {
    let mut h = format!("# strategem {VERSION} seed={seed} scenario={hash}");
    if !extra.is_empty() {
        h.push(' ');
        h.push_str(extra);
    }
    h.push('\n');
    h
}

pub(crate) fn table(head: &str, rows: &[Vec<String>], header_fields: &[&str]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header_fields)?;
    for r in rows {
        w.write_record(r)?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?).expect("csv is utf-8");
    Ok(format!("{head}{body}"))
}

/// Parses and resolves a scenario without running it.
pub fn validate(text: &str) -> Result<Resolved> {
    Scenario::from_json(text)?.resolve()
}

/// Runs a scenario; `seed` overrides the file's Monte Carlo seed.
pub fn run(text: &str, seed: Option<u64>) -> Result<Artifact> {
    let mut resolved = validate(text)?;
    if let Some(s) = seed {
        resolved.scenario.mc.seed = s;
    }
    let hash = content_hash(text.as_bytes());
    execute(&resolved, &hash)
}

fn fmt_edge(r: &Resolved, (a, b): (usize, usize), sep: &str) -> String {
    format!("{}{sep}{}", r.scm.name(a), r.scm.name(b))
}

fn transcript_artifact(r: &Resolved, result: &OrientationResult, head: String) -> Result<Artifact> {
    let id = &r.scenario.id;
    let mut rows = Vec::new();
    let mut summary = format!("scenario {id}\nkind {}\noracle statistical\n", r.scenario.kind.as_str());
    for t in &result.transcript {
        let (point, se) = t.certificate.map_or((String::new(), String::new()), |c| (c.point.to_string(), c.std_error.to_string()));
        let row = vec![
            fmt_edge(r, t.edge, "-"),
            fmt_edge(r, t.direction, "->"),
            if t.classifier_found { "classifier" } else { "fail" }.to_string(),
            point,
            se,
            t.n_calls.to_string(),
        ];
        let _ = writeln!(
            summary,
            "{}: {} ({}) certificate {} se {} calls {}",
            row[0], row[1], row[2], or_dash(&row[3]), or_dash(&row[4]), row[5]
        );
        rows.push(row);
    }
    let csv = table(
        &head,
        &rows,
        &["edge", "direction", "oracle_outcome", "certificate_point", "certificate_se", "n_calls"],
    )?;
    Ok(Artifact { stem: id.clone(), csv, summary })
}

fn or_dash(s: &str) -> &str {
    if s.is_empty() {
        "-"
    } else {
        s
    }
}

fn execute(r: &Resolved, hash: &str) -> Result<Artifact> {
    let sc = &r.scenario;
    let mc = sc.mc;
    let id = sc.id.clone();
    match sc.kind {
        Kind::Simulate => {
            let draws = sample(&r.scm, mc.n_outer, mc.seed)?;
            let names: Vec<&str> = (0..r.scm.len()).map(|i| r.scm.name(i)).collect();
            let mut fields = vec!["index"];
            fields.extend(&names);
            let rows: Vec<Vec<String>> = draws
                .iter()
                .enumerate()
                .map(|(k, (x, _))| std::iter::once(k.to_string()).chain(x.0.iter().map(f64::to_string)).collect())
                .collect();
            let csv = table(&header(mc.seed, hash, ""), &rows, &fields)?;
            let summary = format!("scenario {id}\nkind simulate\nrows {}\ncolumns {}\n", rows.len(), fields.join(","));
            Ok(Artifact { stem: id, csv, summary })
        }
        Kind::Improvement => {
            let label = r.label.expect("resolved");
            let agent = r.agent.as_ref().expect("resolved");
            let e = population_improvement(&r.scm, label, agent, &mc)?;
            let row = vec![id.clone(), e.point.to_string(), e.std_error.to_string(), e.n.to_string(), e.verdict.as_str().to_string()];
            let summary = format!(
                "scenario {}\nkind improvement\npoint {}\nstd_error {}\nn {}\nverdict {}\n",
                row[0], row[1], row[2], row[3], row[4]
            );
            let csv = table(&header(mc.seed, hash, ""), &[row], &["scenario_id", "point", "std_error", "n", "verdict"])?;
            Ok(Artifact { stem: id, csv, summary })
        }
        Kind::Orient => {
            let config = ReductionConfig { seed: mc.seed, certificate: mc, ..ReductionConfig::default() };
            let result = orient_edges(&skeleton_of(r.scm.dag()), &r.scm, &config)?;
            transcript_artifact(r, &result, header(mc.seed, hash, "oracle=statistical"))
        }
        Kind::OrientCost => {
            let probe = ProbeConfig { seed: mc.seed, n_inner: mc.n_inner, alpha: mc.alpha, ..ProbeConfig::default() };
            let result = orient_edges_via_cost(&skeleton_of(r.scm.dag()), &r.scm, &probe)?;
            transcript_artifact(r, &result, header(mc.seed, hash, "oracle=statistical"))
        }
        Kind::SignRecovery => {
            let label = r.label.expect("resolved");
            let dim = r.scm.len() - 1;
            let cost = build_outcome_monotonic_cost(
                &r.scm,
                label,
                ActionSet::FullSpace(dim),
                McSpec { n: mc.n_inner, seed: mc.seed },
            )?;
            let result = linear_sign_recovery(&cost)?;
            let mut summary = format!("scenario {id}\nkind sign-recovery\nqueries {}\n", result.query_count);
            let rows: Vec<Vec<String>> = result
                .features
                .iter()
                .map(|f| {
                    let row = vec![
                        f.name.clone(),
                        f.causal.to_string(),
                        f.sign.to_string(),
                        f.probe_plus.to_string(),
                        f.probe_minus.to_string(),
                    ];
                    let _ = writeln!(summary, "{}: causal {} sign {} probes {} / {}", row[0], row[1], row[2], row[3], row[4]);
                    row
                })
                .collect();
            let head = header(mc.seed, hash, &format!("queries={}", result.query_count));
            let csv = table(&head, &rows, &["feature", "causal", "sign", "probe_plus", "probe_minus"])?;
            Ok(Artifact { stem: id, csv, summary })
        }
        Kind::CheckAssumption => {
            let mut summary = format!("scenario {id}\nkind check-assumption\n");
            let mut rows = Vec::new();
            for &(a, b) in r.scm.dag().edges() {
                for edge in [(a, b), (b, a)] {
                    let grid = ControlGrid {
                        seed: derive_seed(mc.seed, &[edge.0 as u64, edge.1 as u64]),
                        n_inner: mc.n_inner,
                        ..ControlGrid::default()
                    };
                    let c = check_control_assumption(&r.scm, edge, &grid)?;
                    let row = vec![fmt_edge(r, edge, "->"), c.holds.to_string(), c.lift.mean.to_string(), c.lift.std_error.to_string()];
                    let _ = writeln!(summary, "{}: holds {} lift {} se {}", row[0], row[1], row[2], row[3]);
                    rows.push(row);
                }
            }
            let csv = table(&header(mc.seed, hash, ""), &rows, &["edge", "holds", "lift_point", "lift_se"])?;
            Ok(Artifact { stem: id, csv, summary })
        }
    }
}

/// Output directory: the override, else the scenario's own, else `out`.
pub fn output_dir(override_dir: Option<&Path>, scenario: &Scenario) -> PathBuf {
    override_dir
        .map(Path::to_path_buf)
        .or_else(|| scenario.output.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}
