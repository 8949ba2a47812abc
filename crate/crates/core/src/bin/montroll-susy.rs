use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use montroll_susy::app::{self, output::parse_lambdas, EffectiveConfig, RunConfig};
use montroll_susy::error::{Error, Result};

#[derive(Parser)]
#[command(name = "montroll-susy", version, about = "Double wells from Montroll kinks and their Darboux deformations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// JSON config file with flat keys
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a config key, e.g. `--set epsilon=0.05`
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Write the data of one figure as CSV
    Figure {
        #[arg(long)]
        id: u8,
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every consistency check and write the JSON report
    Verify {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tabulate the deformed families for a list of lambdas
    SweepLambda {
        #[arg(long, allow_hyphen_values = true)]
        lambdas: String,
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

fn resolve(args: &ConfigArgs) -> Result<EffectiveConfig> {
    let mut rc = match &args.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    for s in &args.set {
        rc.set(s)?;
    }
    rc.resolve()
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Figure { id, cfg, out } => {
            if !(1..=5).contains(&id) {
                return Err(Error::Config(format!("figure id must be 1..5, got {id}")));
            }
            app::run_figure(id, &resolve(&cfg)?, &out)?;
            Ok(true)
        }
        Command::Verify { cfg, out } => {
            let v = app::run_verify(&resolve(&cfg)?, &out)?;
            print!("{}", v.text);
            Ok(v.passed)
        }
        Command::SweepLambda { lambdas, cfg, out } => {
            let lambdas = parse_lambdas(&lambdas)?;
            app::run_lambda_sweep(&resolve(&cfg)?, &lambdas, &out)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ (Error::Config(_) | Error::LambdaForbidden(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
