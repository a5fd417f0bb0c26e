//! `y00sim`: run scenarios, sweeps and the attack suite from a config file.
//!
//! Exit status: 0 on success, 2 for a bad config or argument, 1 for a
//! failure while running.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use y00::sim::{attack_suite, run_scenario_with, sweep, Execution, ScenarioConfig};
use y00::Error;

#[derive(Parser)]
#[command(name = "y00sim", version, about = "Y-00 quantum stream cipher physical-layer simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo run of one scenario; prints a key = value report.
    Run(Common),
    /// One run per sweep value; writes CSV.
    Sweep(Common),
    /// Minimax pair, SRM error and the entanglement table.
    Attacks(Common),
    /// Print the default scenario as a config file.
    EmitDefaultConfig {
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Scenario config (`key = value` lines); `-` reads stdin.
    config: PathBuf,
    /// Override a config key, e.g. `--set M=8`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Write output here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Worker threads for the Monte Carlo chunks (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Run chunks one after another on the calling thread.
    #[arg(long)]
    sequential: bool,
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config { .. } | Error::Seed(_) | Error::Parameter { .. } => Failure::Config(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn load(common: &Common) -> Result<ScenarioConfig, Failure> {
    let text = if common.config == Path::new("-") {
        io::read_to_string(io::stdin()).map_err(|e| Failure::Config(format!("stdin: {e}")))?
    } else {
        fs::read_to_string(&common.config)
            .map_err(|e| Failure::Config(format!("{}: {e}", common.config.display())))?
    };
    let mut config = ScenarioConfig::parse(&text)?;
    for item in &common.overrides {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| Failure::Config(format!("--set `{item}`: expected KEY=VALUE")))?;
        config.set(key.trim(), value.trim())?;
    }
    config.validate()?;
    Ok(config)
}

fn write_out(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    let result = match output {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    };
    result.map_err(|e| Failure::Runtime(format!("writing output: {e}")))
}

fn execution(common: &Common) -> Result<Execution, Failure> {
    if common.sequential {
        return Ok(Execution::Sequential);
    }
    if common.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(common.threads)
            .build_global()
            .map_err(|e| Failure::Runtime(e.to_string()))?;
    }
    Ok(Execution::Parallel)
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run(c) => {
            let config = load(&c)?;
            let report = run_scenario_with(&config, execution(&c)?)?;
            write_out(c.output.as_deref(), &report.to_report_string())
        }
        Command::Sweep(c) => {
            let config = load(&c)?;
            let series = sweep(&config, execution(&c)?)?;
            write_out(c.output.as_deref(), &series.to_csv_string())
        }
        Command::Attacks(c) => {
            let config = load(&c)?;
            write_out(c.output.as_deref(), &attack_suite(&config)?.to_report_string())
        }
        Command::EmitDefaultConfig { output } => {
            write_out(output.as_deref(), &ScenarioConfig::default().to_config_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("y00sim: config error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("y00sim: {msg}");
            ExitCode::from(1)
        }
    }
}
