use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use trajgreen::cli::{
    dispatch, render, Command, Format, Overrides, PotentialSpec, RunConfig, System,
};
use trajgreen::{Engine, Error};

/// Exact perturbative ground states along a single trajectory.
#[derive(Parser)]
#[command(name = "trajgreen", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Iterate a perturbed harmonic oscillator.
    Solve1d(Common),
    /// Iterate the hydrogen atom in a uniform field.
    Stark(Common),
    /// Check the exact tables and energies against numeric oracles.
    VerifyOracle(Common),
    /// Run both iterations and compare them order by order.
    CompareEngines(Common),
}

#[derive(Args)]
struct Common {
    /// TOML run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Highest power of ε kept.
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    g_value: Option<f64>,
    #[arg(long)]
    eps_value: Option<f64>,
    /// json, csv or text.
    #[arg(long)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// revised or old.
    #[arg(long)]
    engine: Option<Engine>,
    /// zero, linear, even:P or odd:P.
    #[arg(long)]
    potential: Option<PotentialSpec>,
    /// Compare the Stark problem instead of a line problem.
    #[arg(long)]
    stark: bool,
}

const EXIT_FAILED_CHECK: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_ENGINE: u8 = 3;

fn run(command: Command, args: Common) -> Result<bool, Error> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cfg.apply(Overrides {
        order: args.order,
        max_iter: args.max_iter,
        g_value: args.g_value,
        eps_value: args.eps_value,
        format: args.format,
        out: args.out,
        engine: args.engine,
        potential: args.potential,
        system: args.stark.then_some(System::Stark),
    });
    let doc = dispatch(command, &cfg)?;
    let text = render(&doc, cfg.output.format)?;
    match &cfg.output.path {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(doc.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Solve1d(a) => (Command::Solve1d, a),
        Cmd::Stark(a) => (Command::Stark, a),
        Cmd::VerifyOracle(a) => (Command::VerifyOracle, a),
        Cmd::CompareEngines(a) => (Command::CompareEngines, a),
    };
    match run(command, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("trajgreen: {command}: some comparisons failed");
            ExitCode::from(EXIT_FAILED_CHECK)
        }
        Err(e @ Error::Config(_)) => {
            eprintln!("trajgreen: {e}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(e) => {
            eprintln!("trajgreen: {e}");
            ExitCode::from(EXIT_ENGINE)
        }
    }
}
