//! `boolval` command-line tool.

mod commands;
mod config;
mod error;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::{channel_spec, Run};
use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::verify::{Suite, VerifyOptions};

#[derive(Parser)]
#[command(name = "boolval", version, about = "Boolean models with convex polygonal grains")]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Overrides the configured master seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    reps: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ChannelArgs {
    /// Comma-separated channel groups: v0,v1,v2,harmonic,tensor,support,atoms,all.
    #[arg(long)]
    channels: Option<String>,
    #[arg(long)]
    lmax: Option<u32>,
    #[arg(long)]
    smax: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate realizations and write them with a summary.
    Simulate(RunArgs),
    /// Estimate densities and fit the intensity.
    Estimate {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        channels: ChannelArgs,
    },
    /// Run a verification suite.
    Verify {
        suite: Suite,
        /// Replaces the suite's default model.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        reps: Option<usize>,
        /// Monte Carlo samples for the integral-geometry suites.
        #[arg(long)]
        samples: Option<usize>,
        /// Report file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        channels: ChannelArgs,
    },
    /// Dump the table of constants.
    Constants {
        #[arg(long, default_value_t = 4)]
        smax: usize,
        #[arg(long, default_value_t = 8)]
        lmax: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump the mixed index sets mix(j, k) in the plane.
    Mix {
        #[arg(long, default_value_t = 3)]
        kmax: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run_args(a: RunArgs) -> Result<Run> {
    let cfg = ExperimentConfig::load(&a.config)?;
    Run::new(cfg, a.seed, a.reps, a.out)
}

fn execute(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    match cli.command {
        Command::Simulate(a) => commands::simulate(&run_args(a)?),
        Command::Estimate { run, channels } => {
            let run = run_args(run)?;
            let spec = channel_spec(
                channels.channels.as_deref(),
                channels.lmax.or(run.cfg.l_max),
                channels.smax.or(run.cfg.s_max),
            )?;
            commands::estimate(&run, &spec)
        }
        Command::Verify {
            suite,
            config,
            seed,
            reps,
            samples,
            out,
            channels,
        } => {
            let cfg = config.as_deref().map(ExperimentConfig::load).transpose()?;
            let channel_list = channels
                .channels
                .as_deref()
                .map(|c| channel_spec(Some(c), channels.lmax, channels.smax))
                .transpose()?;
            let opt = VerifyOptions {
                seed: seed.or(cfg.as_ref().map(|c| c.seed)),
                reps: reps.or(cfg.as_ref().map(|c| c.reps)),
                samples,
                l_max: channels.lmax.or(cfg.as_ref().and_then(|c| c.l_max)),
                s_max: channels.smax.or(cfg.as_ref().and_then(|c| c.s_max)),
                channels: channel_list,
                model: cfg.as_ref().map(ExperimentConfig::spec).transpose()?,
            };
            verify::verify(suite, &opt, out.as_ref())
        }
        Command::Constants { smax, lmax, out } => commands::constants(smax, lmax, out.as_ref()),
        Command::Mix { kmax, out } => commands::mix(kmax, out.as_ref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
