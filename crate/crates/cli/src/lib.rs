//! Command-line driver for the walkbounds library.
//!
//! Each subcommand reads one JSON config document (`--config`), applies the
//! command-line overrides, runs, and writes a CSV and a JSON artifact into
//! `--out`. Flags take precedence over config fields, which take precedence
//! over the built-in defaults.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use walkbounds::graphwalk::Mode;

use commands::Output;
use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "walkbounds", version, about = "Equidistribution of group-valued walks on decorated graphs")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// JSON config document for the subcommand.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed; overrides the config's seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Walk-count arithmetic; overrides the config's mode.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Distance to uniform of walk products as N grows.
    Walks,
    /// Transfer ratios across congruence quotients.
    TauUniformity,
    /// Reducible fraction of characteristic polynomials of random words.
    Irreducibility,
    /// The shrinkage constant g(lambda, d).
    Shrink {
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        d: Option<f64>,
    },
    /// Per-irreducible and regular transfer-operator spectral radii.
    SpectralGap,
    /// Displacement constants and effective-rate schedules.
    Kazhdan,
}

/// Load, override, and run the selected subcommand.
pub fn execute(cli: &Cli) -> CliResult<Output> {
    let g = &cli.global;
    let path = g.config.as_deref();
    let seed = g.seed.unwrap_or(0);
    match &cli.command {
        Command::Walks => {
            let mut cfg: config::WalksConfig = config::load(path)?;
            if let Some(m) = g.mode {
                cfg.mode = m.into();
            }
            commands::walks::render(&cfg, &commands::walks::run(&cfg)?, seed)
        }
        Command::TauUniformity => {
            let cfg: config::TauConfig = config::load(path)?;
            commands::tau::render(&cfg, &commands::tau::run(&cfg)?, seed)
        }
        Command::Irreducibility => {
            let mut cfg: config::IrreducibilityConfig = config::load(path)?;
            if let Some(s) = g.seed {
                cfg.seed = s;
            }
            let report = commands::irreducibility::run(&cfg, cfg.seed)?;
            commands::irreducibility::render(&cfg, &report, cfg.seed)
        }
        Command::Shrink { lambda, d } => {
            let mut cfg: config::ShrinkConfig = config::load(path)?;
            cfg.lambda = lambda.unwrap_or(cfg.lambda);
            cfg.d = d.unwrap_or(cfg.d);
            commands::shrink::render(&commands::shrink::run(&cfg)?)
        }
        Command::SpectralGap => {
            let cfg: config::SpectralGapConfig = config::load(path)?;
            commands::spectral_gap::render(&cfg, &commands::spectral_gap::run(&cfg)?, seed)
        }
        Command::Kazhdan => {
            let cfg: config::KazhdanConfig = config::load(path)?;
            commands::kazhdan::render(&cfg, &commands::kazhdan::run(&cfg)?, seed)
        }
    }
}

/// Run a parsed command line end to end: thread pool, execution, artifacts.
/// Returns the process exit code.
pub fn main_with(cli: &Cli) -> i32 {
    if let Some(k) = cli.global.threads {
        if k == 0 {
            eprintln!("error: --threads must be positive");
            return 2;
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: cannot configure thread pool: {e}");
            return 2;
        }
    }
    let result = execute(cli).and_then(|out| {
        let written = output::write_all(&cli.global.out, &out.artifacts)?;
        Ok((out, written))
    });
    match result {
        Ok((out, written)) => {
            if !out.summary.is_empty() {
                println!("{}", out.summary);
            }
            for p in written {
                println!("wrote {}", p.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, CliError::Core(walkbounds::Error::ResourceCap { .. })) {
                eprintln!("hint: try --mode float, a smaller group, or shorter walks");
            }
            e.exit_code()
        }
    }
}
