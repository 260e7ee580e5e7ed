#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

mod config;
mod error;
mod output;
mod scenarios;

use config::{parse_assignment, parse_config_text, Scenario, Settings};
use error::{CliError, CliResult};

/// Runs simulation and theory scenarios for geometric inhomogeneous random graphs.
#[derive(Debug, Parser)]
#[command(name = "girg-lab", version)]
struct Cli {
    scenario: Scenario,

    /// `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,

    #[arg(long)]
    seed: Option<u64>,

    #[arg(long)]
    trials: Option<String>,

    /// Output path. CSV goes to stdout when absent and no manifest is written.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Omit the timestamp from the manifest.
    #[arg(long)]
    deterministic: bool,

    /// Worker threads for the parallel build.
    #[arg(long)]
    threads: Option<usize>,

    /// Override any config key, e.g. `--set n=5000`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn settings(cli: &Cli) -> CliResult<Settings> {
    let mut layers = Vec::new();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        layers.push(parse_config_text(&text)?);
    }
    let mut flags = Vec::new();
    if let Some(seed) = cli.seed {
        flags.push(("seed".to_string(), seed.to_string()));
    }
    if let Some(t) = &cli.trials {
        flags.push(("trials".to_string(), t.clone()));
    }
    if let Some(out) = &cli.out {
        flags.push(("out".to_string(), out.display().to_string()));
    }
    if cli.deterministic {
        flags.push(("deterministic".to_string(), "true".to_string()));
    }
    for s in &cli.set {
        flags.push(parse_assignment(s)?);
    }
    layers.push(flags);
    Settings::resolve(cli.scenario, &layers)
}

fn set_threads(threads: Option<usize>) -> CliResult<()> {
    let Some(t) = threads else { return Ok(()) };
    if t == 0 {
        return Err(error::invalid("threads", "must be at least 1"));
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(t)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(())
}

fn run(cli: &Cli) -> CliResult<()> {
    set_threads(cli.threads)?;
    let s = settings(cli)?;
    let deterministic = match s.values().get("deterministic").map(String::as_str) {
        None | Some("false") => false,
        Some("true") => true,
        Some(other) => {
            return Err(error::invalid(
                "deterministic",
                format!("`{other}` is not true or false"),
            ))
        }
    };
    let job = scenarios::prepare(&s).map_err(|e| match e {
        CliError::Core(e) => error::invalid("parameters", e.to_string()),
        e => e,
    })?;
    let artifact = job()?;
    match s.values().get("out") {
        Some(out) => output::write_outputs(&artifact, out.as_ref(), &s, deterministic),
        None => output::write_artifact(&artifact, std::io::stdout().lock()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Usage(e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
