use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use levy_pide_cli::config::{Output, OutputKind};
use levy_pide_cli::{check, preset, CliError, Overrides, RunConfig};

/// Prices European and American options under geometric Lévy models by
/// finite differences.
///
/// Exit codes: 0 success, 1 invalid configuration, 2 numerical failure.
/// `LEVY_PIDE_THREADS` sets the worker thread count.
#[derive(Parser)]
#[command(name = "levy-pide", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Price every model and scenario of a configuration file.
    Price {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Report measure admissibility, integrability and structural conditions.
    Check {
        #[arg(long)]
        config: PathBuf,
    },
    /// Reproduce the European put price table (Black-Scholes, variance gamma, Merton).
    Table1 {
        /// Write the `model,rate,S,V` table here.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Write plot data here; `{rate}` is replaced by each rate.
        #[arg(long)]
        plotdata: Option<PathBuf>,
        /// Print the preset as a configuration file and exit.
        #[arg(long)]
        print_config: bool,
    },
}

#[derive(Args)]
struct OverrideArgs {
    /// Keep only the model with this label, or price this inline JSON model.
    #[arg(long)]
    model: Option<String>,
    /// Replace the scenario rates (repeatable); spots of all scenarios are pooled.
    #[arg(long = "rate")]
    rates: Vec<f64>,
    /// Path of the price table.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Number of space steps.
    #[arg(long)]
    grid_n: Option<usize>,
    /// Number of time steps.
    #[arg(long)]
    grid_m: Option<usize>,
    /// Penalty parameter for American runs.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Use the Black-Scholes formula for models without jumps.
    #[arg(long)]
    closed_form: bool,
    /// Monte Carlo seed; enables Monte Carlo estimates if not configured.
    #[arg(long)]
    seed: Option<u64>,
}

impl From<OverrideArgs> for Overrides {
    fn from(a: OverrideArgs) -> Self {
        Self {
            model: a.model,
            rates: a.rates,
            output: a.output,
            grid_n: a.grid_n,
            grid_m: a.grid_m,
            epsilon: a.epsilon,
            closed_form: a.closed_form,
            seed: a.seed,
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("LEVY_PIDE_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("LEVY_PIDE_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot start {n} threads: {e}")))
}

fn print_priced(cfg: &RunConfig) -> Result<(), CliError> {
    let (summary, warnings) = levy_pide_cli::price(cfg)?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    print!("{summary}");
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Price { config, overrides } => {
            let mut cfg = RunConfig::load(&config)?;
            cfg.apply(&overrides.into())?;
            print_priced(&cfg)
        }
        Command::Check { config } => {
            let cfg = RunConfig::load(&config)?;
            cfg.validate()?;
            print!("{}", check::report(&cfg)?);
            Ok(())
        }
        Command::Table1 {
            output,
            plotdata,
            print_config,
        } => {
            let mut cfg = preset::table1();
            if let Some(path) = output {
                cfg.outputs.push(Output { kind: OutputKind::Table, path });
            }
            if let Some(path) = plotdata {
                cfg.outputs.push(Output { kind: OutputKind::Plotdata, path });
            }
            if print_config {
                println!("{}", cfg.to_json());
                return Ok(());
            }
            print_priced(&cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
