//! `alat`: runs task files and named invariant suites against the lattice
//! engine and writes deterministic TOML reports.

mod model;
mod report;
mod run;
mod task;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use abelian_lattice::{Error, Result};
use clap::Parser;

use report::{Report, Status, TaskEcho};
use task::{load_task, TaskKind, TaskSpec};

/// Seed used by `--suite` when none is given; the acceptance target uses
/// the same value.
const DEFAULT_SUITE_SEED: u64 = 20240601;

#[derive(Debug, Parser)]
#[command(
    name = "alat",
    version,
    about = "Exact checks for planar abelian lattice models"
)]
#[command(group = clap::ArgGroup::new("mode").required(true).args(["task", "suite"]))]
struct Args {
    /// Task file to run.
    #[arg(long, value_name = "FILE")]
    task: Option<PathBuf>,
    /// Named invariant suite: kw, abelian, fk, loop, baxter, dgff or dimer.
    #[arg(long, value_name = "NAME")]
    suite: Option<String>,
    /// Seed for every random draw; overrides the task file.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Report destination; overrides the task file. Defaults to stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Worker threads for parallel enumeration.
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::TooLarge { .. } | Error::TruncationInsufficient(_) => 3,
        _ => 2,
    }
}

fn execute(args: &Args) -> Result<(Report, Option<PathBuf>)> {
    if let Some(name) = &args.suite {
        let seed = args.seed.unwrap_or(DEFAULT_SUITE_SEED);
        let mut params = toml::Table::new();
        params.insert("suite".into(), toml::Value::String(name.clone()));
        let spec = TaskSpec {
            kind: TaskKind::InvariantSuite,
            model: None,
            seed: Some(seed),
            out: None,
            params,
        };
        let outcome = run::run_suite(name, seed)?;
        let echo = TaskEcho {
            spec,
            resolved_model: None,
        };
        return Ok((Report::new(echo, seed, outcome), args.out.clone()));
    }
    let path = args.task.as_ref().expect("clap requires --task or --suite");
    let loaded = load_task(path)?;
    let mut spec = loaded.spec.clone();
    let seed = args.seed.or(spec.seed).ok_or_else(|| {
        Error::ParseError("no seed in the task file or on the command line".into())
    })?;
    spec.seed = Some(seed);
    let outcome = match (spec.kind, &loaded.model) {
        (TaskKind::InvariantSuite, None) => run::run_suite_task(&spec.params, seed)?,
        (TaskKind::InvariantSuite, Some(_)) => {
            return Err(Error::SpecInvalid(
                "invariant-suite tasks take no model".into(),
            ))
        }
        (_, None) => return Err(Error::SpecInvalid("task needs a model".into())),
        (kind, Some(m)) => {
            let model = model::build_model(m, &loaded.model_dir)?;
            run::run_task(kind, &model, &spec.params, seed)?
        }
    };
    let out = args
        .out
        .clone()
        .or_else(|| spec.out.as_ref().map(|o| loaded.dir.join(o)));
    // an inline model is already in the echo
    let resolved_model = match spec.model {
        Some(task::ModelRef::File(_)) => loaded.model,
        _ => None,
    };
    let echo = TaskEcho {
        spec,
        resolved_model,
    };
    Ok((Report::new(echo, seed, outcome), out))
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: ThreadPool: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let (report, out) = match execute(&args) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            return ExitCode::from(exit_code(&e));
        }
    };
    let text = report.to_toml();
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &text) {
                eprintln!("error: Io: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    // kept out of the report so identical runs give identical bytes
    eprintln!(
        "status: {:?}, wall time {:.3} s",
        report.status,
        start.elapsed().as_secs_f64()
    );
    match report.status {
        Status::Pass => ExitCode::SUCCESS,
        Status::Fail => ExitCode::from(1),
    }
}
