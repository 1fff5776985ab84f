use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use strategem::experiment::{self, Artifact};
use strategem::Error;

#[derive(Parser)]
#[command(name = "strategem", version, about = "Strategic classification experiments on causal models")]
struct Cli {
    /// Overrides the seed stored in the input file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for CSV and summary output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, env = "STRATEGEM_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file.
    Run { scenario: PathBuf },
    /// Run an orientation benchmark over random models.
    Bench { config: PathBuf },
    /// Check a scenario file without running it.
    Validate { scenario: PathBuf },
}

fn read(path: &Path) -> Result<String, Error> {
    Ok(std::fs::read_to_string(path)?)
}

fn report(artifact: &Artifact, dir: &Path) -> Result<(), Error> {
    let (csv, summary) = artifact.write(dir)?;
    print!("{}", artifact.summary);
    eprintln!("wrote {} and {}", csv.display(), summary.display());
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<(), Error> {
    match &cli.command {
        Command::Run { scenario } => {
            let text = read(scenario)?;
            let resolved = experiment::validate(&text)?;
            let dir = experiment::output_dir(cli.out.as_deref(), &resolved.scenario);
            let artifact = experiment::run(&text, cli.seed)?;
            report(&artifact, &dir)
        }
        Command::Bench { config } => {
            let text = read(config)?;
            let artifact = experiment::bench(&text, cli.seed)?;
            report(&artifact, cli.out.as_deref().unwrap_or(Path::new("out")))
        }
        Command::Validate { scenario } => {
            let resolved = experiment::validate(&read(scenario)?)?;
            println!("ok: {} ({})", resolved.scenario.id, resolved.scenario.kind.as_str());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        pool = pool.num_threads(n);
    }
    let result = match pool.build() {
        Ok(pool) => pool.install(|| dispatch(&cli)),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_schema_error() { 2 } else { 3 })
        }
    }
}
