use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sumprod_cli::{emit_plots, exit, init_workers, run, CliError, ExperimentConfig, Kind, RawConfig};

/// Sum-product laboratory over prime fields.
#[derive(Parser)]
#[command(name = "sumprod-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every invariant suite at each q.
    VerifyAll(RunArgs),
    /// Extremal max(|A+A|, |A·A|) tables.
    Sumprod(RunArgs),
    /// Seeded point-line incidence experiments.
    Incidence(RunArgs),
    /// Extremal distance-set tables.
    Distance(RunArgs),
    /// Small Besicovitch sets by seeded descent.
    Kakeya(RunArgs),
    /// Write plotting scripts for the result CSVs in a directory.
    Plot {
        /// Results directory.
        #[arg(default_value = sumprod_cli::config::DEFAULT_OUT)]
        dir: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// TOML file with the same keys; key=value arguments win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Settings such as q=7,11 n=2..4 mode=exhaustive seed=1 out=results.
    #[arg(value_name = "KEY=VALUE")]
    settings: Vec<String>,
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let (kind, args) = match cli.command {
        Command::Plot { dir } => {
            for p in emit_plots(&dir)? {
                println!("wrote {}", p.display());
            }
            return Ok(exit::OK);
        }
        Command::VerifyAll(a) => (Kind::VerifyAll, a),
        Command::Sumprod(a) => (Kind::Sumprod, a),
        Command::Incidence(a) => (Kind::Incidence, a),
        Command::Distance(a) => (Kind::Distance, a),
        Command::Kakeya(a) => (Kind::Kakeya, a),
    };
    let file = match &args.config {
        Some(p) => RawConfig::from_file(p)?,
        None => RawConfig::default(),
    };
    let cfg = ExperimentConfig::resolve(kind, RawConfig::from_overrides(&args.settings)?.over(file))?;
    init_workers()?;
    let outcome = run(&cfg)?;
    for f in &outcome.manifest.files {
        println!("wrote {}", cfg.out.join(f).display());
    }
    println!("config hash {}", outcome.manifest.config_hash);
    if outcome.violations.is_empty() {
        return Ok(exit::OK);
    }
    for v in &outcome.violations {
        eprintln!("violation: {v}");
    }
    Ok(exit::VIOLATION)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("sumprod-lab: {e}");
            ExitCode::from(exit::CONFIG as u8)
        }
    }
}
