//! Run a scenario file the way the CLI does and print its CSV.
//!
//! `cargo run --example run_scenario -- crates/core/scenarios/counterexample.json`

use std::path::PathBuf;

use strategem::experiment;

fn main() -> strategem::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/example1.json"));
    let text = std::fs::read_to_string(&path)?;
    let artifact = experiment::run(&text, None)?;
    print!("{}", artifact.csv);
    Ok(())
}
