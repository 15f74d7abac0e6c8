// `!(x > 0.0)` guards deliberately catch NaN alongside the sign check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Batch driver: configure potentials, states and probes; solve bound
//! states; verify relation residuals; run classical-orbit comparisons.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "virial",
    about = "Radial bound states and the matrix-element relations they satisfy",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Run configuration (INI-style sections; JSON accepted)
    #[arg(long)]
    config: PathBuf,
    /// Output directory for states/ and reports/
    #[arg(long)]
    out: PathBuf,
    /// Override [tolerance] rel
    #[arg(long)]
    tol: Option<f64>,
    /// Override [grid] h
    #[arg(long)]
    grid_h: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the configured bound states and export them
    Solve(CommonArgs),
    /// Evaluate relation residuals and report pass/fail
    Verify(CommonArgs),
    /// Classical orbits: averages, virial residuals, quantum comparison
    Classical(CommonArgs),
    /// The generalized relation for states solved in N dimensions
    Ndim(CommonArgs),
}

fn load_config(args: &CommonArgs) -> Result<RunConfig, String> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| format!("cannot read {}: {e}", args.config.display()))?;
    let mut cfg = RunConfig::parse(&text).map_err(|e| e.to_string())?;
    if let Some(tol) = args.tol {
        if !(tol > 0.0) {
            return Err(format!("--tol must be positive, got {tol}"));
        }
        cfg.tol = tol;
    }
    if let Some(h) = args.grid_h {
        if !(h > 0.0 && h < 0.1) {
            return Err(format!("--grid-h {h} out of range (0, 0.1)"));
        }
        cfg.grid_h = h;
    }
    Ok(cfg)
}

fn run(command: &Command) -> Result<i32, String> {
    let args = match command {
        Command::Solve(a) | Command::Verify(a) | Command::Classical(a) | Command::Ndim(a) => a,
    };
    let cfg = load_config(args)?;
    std::fs::create_dir_all(&args.out)
        .map_err(|e| format!("cannot create {}: {e}", args.out.display()))?;
    let code = match command {
        Command::Solve(_) => commands::cmd_solve(&cfg, &args.out),
        Command::Verify(_) => commands::cmd_verify(&cfg, &args.out),
        Command::Classical(_) => commands::cmd_classical(&cfg, &args.out),
        Command::Ndim(_) => commands::cmd_ndim(&cfg, &args.out),
    };
    code.map_err(|e| format!("i/o failure: {e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
