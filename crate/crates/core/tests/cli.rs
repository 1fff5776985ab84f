use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn strategem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strategem")).args(args).env_remove("STRATEGEM_THREADS").output().unwrap()
}

fn run(file: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["run", file.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend(extra);
    strategem(&args)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn example1_with(edit: impl FnOnce(&mut serde_json::Value)) -> String {
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(scenario("example1.json")).unwrap()).unwrap();
    edit(&mut v);
    v.to_string()
}

#[test]
fn bundled_scenarios_run() {
    let dir = tempfile::tempdir().unwrap();
    for (file, id) in [
        ("example1.json", "example1"),
        ("counterexample.json", "counterexample"),
        ("simulate.json", "simulate"),
        ("orient.json", "orient"),
        ("orient_cost.json", "orient_cost"),
        ("sign_recovery.json", "sign_recovery"),
        ("check_assumption.json", "check_assumption"),
    ] {
        let o = run(&scenario(file), dir.path(), &[]);
        assert!(o.status.success(), "{file}: {}", stderr(&o));
        let csv = fs::read_to_string(dir.path().join(format!("{id}.csv"))).unwrap();
        assert!(csv.starts_with("# strategem "), "{file}: {csv}");
        assert!(dir.path().join(format!("{id}.summary.txt")).exists());
    }
}

#[test]
fn example_one_reports_improvement() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&scenario("example1.json"), dir.path(), &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("example1.csv")).unwrap();
    let mut lines = csv.lines();
    let head = lines.next().unwrap();
    assert!(head.contains("seed=7"), "{head}");
    assert!(head.split("scenario=").nth(1).is_some_and(|h| h.len() == 16));
    assert_eq!(lines.next(), Some("scenario_id,point,std_error,n,verdict"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let point: f64 = row[1].parse().unwrap();
    assert!((point - 0.5).abs() < 1e-12, "{point}");
    assert_eq!(row[4], "improvement");
}

#[test]
fn orientation_transcript_marks_the_oracle() {
    let dir = tempfile::tempdir().unwrap();
    for (file, id) in [("orient.json", "orient"), ("orient_cost.json", "orient_cost")] {
        let o = run(&scenario(file), dir.path(), &[]);
        assert!(o.status.success(), "{}", stderr(&o));
        let csv = fs::read_to_string(dir.path().join(format!("{id}.csv"))).unwrap();
        assert!(csv.lines().next().unwrap().contains("oracle=statistical"));
        let directions: Vec<&str> = csv.lines().skip(2).map(|l| l.split(',').nth(1).unwrap()).collect();
        assert_eq!(directions, ["A->B", "B->C", "D->C"], "{file}");
    }
}

#[test]
fn malformed_json_exits_2_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    fs::write(&file, "{\"id\": \"bad\", \"kind\": ").unwrap();
    let out = dir.path().join("out");
    let o = run(&file, &out, &[]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(!out.exists());
}

#[test]
fn schema_errors_exit_2_and_name_the_problem() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("unknown-node", example1_with(|v| v["label"] = "W".into()), "W"),
        ("unknown-field", example1_with(|v| v["colour"] = "red".into()), "colour"),
        ("missing-cost", example1_with(|v| v.as_object_mut().unwrap().remove("cost").map(|_| ()).unwrap()), "cost"),
        ("wrong-shape", example1_with(|v| v["cost"]["matrix"] = serde_json::json!([[1.0]])), "cost.matrix"),
        ("not-pd", example1_with(|v| v["cost"]["matrix"] = serde_json::json!([[1.0, 2.0], [2.0, 1.0]])), "cost.matrix"),
        (
            "cycle",
            example1_with(|v| v["scm"]["edges"].as_array_mut().unwrap().push(serde_json::json!(["Z", "X"]))),
            "cycle",
        ),
    ];
    for (name, text, needle) in cases {
        let file = dir.path().join(format!("{name}.json"));
        fs::write(&file, text).unwrap();
        let out = dir.path().join(name);
        let o = run(&file, &out, &[]);
        assert_eq!(o.status.code(), Some(2), "{name}: {}", stderr(&o));
        assert!(stderr(&o).to_lowercase().contains(&needle.to_lowercase()), "{name}: {}", stderr(&o));
        assert!(!out.exists(), "{name}");
        let v = strategem(&["validate", file.to_str().unwrap()]);
        assert_eq!(v.status.code(), Some(2), "{name}");
    }
}

#[test]
fn oversized_grid_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("huge.json");
    fs::write(&file, example1_with(|v| v["solver"] = serde_json::json!({"kind": "grid", "resolution": 1e-4, "radius": 10.0})))
        .unwrap();
    let out = dir.path().join("out");
    let o = run(&file, &out, &[]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(!out.exists());
}

#[test]
fn validate_accepts_bundled_scenarios() {
    let o = strategem(&["validate", scenario("orient.json").to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "ok: orient (orient)");
}

#[test]
fn seed_flag_overrides_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(run(&scenario("counterexample.json"), &a, &[]).status.success());
    assert!(run(&scenario("counterexample.json"), &b, &["--seed", "12345"]).status.success());
    let read = |d: &Path| fs::read_to_string(d.join("counterexample.csv")).unwrap();
    let (ca, cb) = (read(&a), read(&b));
    assert!(cb.lines().next().unwrap().contains("seed=12345"));
    assert_ne!(ca.lines().nth(2), cb.lines().nth(2));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(run(&scenario("check_assumption.json"), &a, &["--threads", "1"]).status.success());
    assert!(run(&scenario("check_assumption.json"), &b, &["--threads", "3"]).status.success());
    for f in ["check_assumption.csv", "check_assumption.summary.txt"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn thread_count_falls_back_to_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bench.json");
    fs::write(&config, r#"{"n_trials": 3, "seed": 9}"#).unwrap();
    let bench = |threads: &str, out: &Path| {
        Command::new(env!("CARGO_BIN_EXE_strategem"))
            .args(["bench", config.to_str().unwrap(), "--out", out.to_str().unwrap()])
            .env("STRATEGEM_THREADS", threads)
            .output()
            .unwrap()
    };
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(bench("1", &a).status.success());
    assert!(bench("2", &b).status.success());
    assert_eq!(fs::read(a.join("bench.csv")).unwrap(), fs::read(b.join("bench.csv")).unwrap());
    let bad = bench("many", &dir.path().join("c"));
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn bench_csv_has_one_row_per_trial() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bench.json");
    fs::write(&config, r#"{"n_trials": 4, "node_range": [3, 4], "seed": 2}"#).unwrap();
    let o = strategem(&["bench", config.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("bench.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 1 + 1 + 4 + 1);
    assert_eq!(lines[1], "trial,n_nodes,n_edges,incentive_correct,incentive_calls,cost_correct,cost_calls,agree");
    assert!(lines[6].starts_with("# totals trials=4"));
}
