//! `anse`: drive configured solver runs, the damped toy model, the inequality
//! verifiers, and parameter sweeps from one binary.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 a monitored
//! property (continuation threshold or verified inequality) was violated,
//! 3 analyticity-radius budget exhausted, 4 numerical blow-up.

mod config;
mod init;
mod run;
mod sweep;
mod toy_cmd;
mod verify_cmd;

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "anse",
    version,
    about = "Anisotropic Navier-Stokes experiments: runs, sweeps, verification"
)]
struct Cli {
    /// TOML run configuration (required by every subcommand except verify-lp,
    /// which falls back to the calibration defaults)
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Override outputs.directory from the config
    #[arg(long, global = true, value_name = "DIR")]
    output_dir: Option<PathBuf>,

    /// Override init.seed from the config
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Suppress progress output (artifacts are still written)
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the rescaled system with the analyticity monitor attached
    RunRns,
    /// Integrate the one-dimensional damped quadratic model
    RunToy,
    /// Measure the functional inequalities against the recorded baselines
    VerifyLp {
        /// Random trials per verifier
        #[arg(long, default_value_t = 20)]
        trials: u32,
    },
    /// Run one configuration across several values of one parameter
    Sweep {
        /// One of: eps, eta, lambda, a, dt, n
        #[arg(long)]
        param: String,
        /// Comma-separated values, e.g. --values 0.5,0.25,0.125
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
    /// Continue a saved run to the config's t_end
    Resume {
        /// Checkpoint file written by an earlier run
        checkpoint: PathBuf,
    },
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let path = cli
        .config
        .as_ref()
        .context("this subcommand needs --config <FILE>")?;
    let mut cfg = RunConfig::load(path)?;
    cfg.apply_overrides(cli.seed, cli.output_dir.as_deref());
    Ok(cfg)
}

fn dispatch(cli: Cli) -> Result<i32> {
    match &cli.command {
        Command::RunRns => {
            let cfg = load_config(&cli)?;
            let art = run::run_rns(&cfg, cli.quiet)?;
            if !cli.quiet {
                println!("series: {}", art.series_path.display());
                println!("report: {}", art.report_path.display());
            }
            Ok(art.outcome.exit_code())
        }
        Command::RunToy => {
            let cfg = load_config(&cli)?;
            let art = toy_cmd::run_toy(&cfg, cli.quiet)?;
            if !cli.quiet {
                println!(
                    "series: {} ({} samples)",
                    art.series_path.display(),
                    art.trajectory.rows.len()
                );
            }
            Ok(art.exit_code)
        }
        Command::VerifyLp { trials } => {
            let cfg = match cli.config.as_ref() {
                Some(path) => {
                    let mut c = RunConfig::load(path)?;
                    c.apply_overrides(cli.seed, cli.output_dir.as_deref());
                    Some(c)
                }
                None => None,
            };
            let out_dir = cfg
                .as_ref()
                .map(|c| c.outputs.directory.clone())
                .or_else(|| cli.output_dir.clone())
                .unwrap_or_else(|| PathBuf::from("out"));
            let art = verify_cmd::verify_lp(cfg.as_ref(), &out_dir, *trials, cli.quiet)?;
            if !cli.quiet {
                println!("report: {}", art.report_path.display());
            }
            Ok(art.exit_code)
        }
        Command::Sweep { param, values } => {
            let cfg = load_config(&cli)?;
            sweep::sweep(&cfg, param, values, cli.quiet)
        }
        Command::Resume { checkpoint } => {
            let cfg = load_config(&cli)?;
            let art = run::resume_run(&cfg, checkpoint, cli.quiet)?;
            if !cli.quiet {
                println!("series: {}", art.series_path.display());
            }
            Ok(art.outcome.exit_code())
        }
    }
}
