//! `segfront`: command-line harness for the fast-reaction front solvers.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Result;
use clap::{Parser, Subcommand};

use commands::{Status, Timer};
use config::{Overrides, RunConfig};
use output::{Manifest, Output};

#[derive(Parser)]
#[command(name = "segfront", version, about = "Fast-reaction limits of two-species reaction-diffusion fronts")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML config with [problem], [grid], [solver], [sweep], [analysis], [output].
    #[arg(long, global = true, default_value = "segfront.toml")]
    config: PathBuf,

    /// Output directory; overrides [output] dir.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for sweeps and property suites.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Seed for randomized property checks; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Only report errors.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Solve for the self-similar limit profile and check its residuals.
    Profile,
    /// Integrate the problem and write snapshots.
    Solve,
    /// Sweep k or d_v and check the convergence trends.
    Sweep,
    /// Evaluate the rescaled long-time error at the configured times.
    Longtime,
    /// Run the full property suite and write a scorecard.
    Verify,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Profile => "profile",
            Command::Solve => "solve",
            Command::Sweep => "sweep",
            Command::Longtime => "longtime",
            Command::Verify => "verify",
        }
    }
}

/// 1 for invalid input, 2 for solver errors.
fn error_code(e: &anyhow::Error) -> u8 {
    match e.chain().find_map(|c| c.downcast_ref::<segfront_core::Error>()) {
        Some(segfront_core::Error::InvalidInput(_)) | None => 1,
        Some(_) => 2,
    }
}

fn execute(cli: &Cli, cfg: &RunConfig, out: &mut Output, timer: &mut Timer) -> Result<Status> {
    match cli.command {
        Command::Profile => commands::profile(cfg, out, timer),
        Command::Solve => commands::solve(cfg, out, timer),
        Command::Sweep => commands::sweep(cfg, out, timer),
        Command::Longtime => commands::longtime(cfg, out, timer),
        Command::Verify => commands::verify(cfg, out, timer),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.quiet { "error" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    if let Some(n) = cli.workers {
        if n == 0 || rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            log::error!("--workers must be a positive thread count");
            return ExitCode::from(1);
        }
    }
    let started = Instant::now();
    let overrides = Overrides { output: cli.output.clone(), seed: cli.seed };
    let prepared = RunConfig::load(&cli.config, &overrides).and_then(|cfg| {
        let out = Output::prepare(&cfg.output_dir)?;
        Ok((cfg, out))
    });
    let (cfg, mut out) = match prepared {
        Ok(p) => p,
        Err(e) => {
            log::error!("{e:#}");
            return ExitCode::from(1);
        }
    };

    let mut timer = Timer::default();
    let code = match execute(&cli, &cfg, &mut out, &mut timer) {
        Ok(status) => {
            match &status {
                Status::Pass => log::info!("{}: pass", cli.command.name()),
                Status::SolverFailure(msg) => log::error!("solver failure: {msg}"),
                Status::PropertyFailure(names) => log::error!("property failure: {}", names.join(", ")),
            }
            status.code() as u8
        }
        Err(e) => {
            log::error!("{e:#}");
            error_code(&e)
        }
    };

    timer.phases.insert("total".into(), started.elapsed().as_secs_f64());
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: cli.command.name(),
        config_hash: cfg.hash(),
        seed: cfg.seed,
        workers: rayon::current_num_threads(),
        exit_code: code as i32,
        wall_time_s: timer.phases,
        files: out.files().to_vec(),
        config: &cfg,
    };
    if let Err(e) = out.json("manifest.json", &manifest) {
        log::error!("{e:#}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
