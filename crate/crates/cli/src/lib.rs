//! Command-line front end: configuration, subcommands, CSV output, run
//! manifests and plot scripts.

pub mod commands;
pub mod config;
pub mod manifest;
pub mod output;
pub mod plots;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::RunConfig;
pub use manifest::Manifest;

/// Environment variable selecting the worker-pool size.
pub const WORKERS_ENV: &str = "HOPF_NOISE_WORKERS";

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;
pub const EXIT_DIVERGENCE: i32 = 4;

const AFTER_HELP: &str = "\
Exit codes:
  0  success
  1  I/O or other failure
  2  usage error (bad flag, config value or parameter)
  3  a root finder or onset search did not converge
  4  a trajectory diverged

Environment:
  HOPF_NOISE_WORKERS  worker threads (default: available parallelism)
  RUST_LOG            log filter, e.g. info";

/// Bad user input; maps to exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

#[derive(Debug, Parser)]
#[command(name = "hopf-noise", version, about = "Noise-shifted Hopf bifurcation of a delayed feedback loop", after_help = AFTER_HELP)]
pub struct Cli {
    /// TOML config, or a manifest.json from an earlier run to replay.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed for every noise stream.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Trials per ensemble.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hopf point of the linearized loop: tau, eta_c, w_c, Re d, Im d.
    Hopf {
        #[arg(long, allow_negative_numbers = true)]
        tau: Option<f64>,
    },
    /// Fixed point and Taylor coefficients of the sigmoid loop.
    Expand {
        #[arg(long, allow_negative_numbers = true)]
        gamma: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        slope: Option<f64>,
    },
    /// Stable-mode variance and the resulting parameter shift per noise level.
    Sigma2 {
        /// Comma-separated noise intensities.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        noise: Option<Vec<f64>>,
        #[arg(long, allow_negative_numbers = true)]
        eps: Option<f64>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Noise-free, ensemble-mean and corrected trajectories at one (eps, D).
    Simulate {
        #[arg(long, allow_negative_numbers = true)]
        eps: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        noise: Option<f64>,
        /// Keep every n-th step in trajectory.csv.
        #[arg(long)]
        decimation: Option<usize>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Amplitude sweep over an eps grid and a list of noise intensities.
    Scan {
        #[arg(long, allow_negative_numbers = true)]
        eps_min: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        eps_max: Option<f64>,
        #[arg(long)]
        eps_step: Option<f64>,
        /// Comma-separated noise intensities.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        noise: Option<Vec<f64>>,
        /// Onset amplitude threshold (default: u_init).
        #[arg(long)]
        threshold: Option<f64>,
        #[command(flatten)]
        run: RunArgs,
    },
}

/// Overrides shared by the simulating commands.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub u_init: Option<f64>,
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl RunArgs {
    fn apply(&self, c: &mut RunConfig) {
        set(&mut c.tau, self.tau);
        set(&mut c.dt, self.dt);
        set(&mut c.n_steps, self.steps);
        set(&mut c.u_init, self.u_init);
    }
}

impl Cli {
    /// Config file (or defaults) with the command-line flags applied on top.
    pub fn resolve(&self) -> anyhow::Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        set(&mut c.seed, self.seed);
        set(&mut c.n_trials, self.trials);
        if self.out.is_some() {
            c.out = self.out.clone();
        }
        match &self.command {
            Command::Hopf { tau } => set(&mut c.tau, *tau),
            Command::Expand { gamma, slope } => {
                set(&mut c.gamma, *gamma);
                set(&mut c.slope, *slope);
            }
            Command::Sigma2 { noise, eps, run } => {
                set(&mut c.noise_grid, noise.clone());
                set(&mut c.eps, *eps);
                run.apply(&mut c);
            }
            Command::Simulate {
                eps,
                noise,
                decimation,
                run,
            } => {
                set(&mut c.eps, *eps);
                set(&mut c.noise, *noise);
                set(&mut c.decimation, *decimation);
                run.apply(&mut c);
            }
            Command::Scan {
                eps_min,
                eps_max,
                eps_step,
                noise,
                threshold,
                run,
            } => {
                set(&mut c.eps_min, *eps_min);
                set(&mut c.eps_max, *eps_max);
                set(&mut c.eps_step, *eps_step);
                set(&mut c.noise_grid, noise.clone());
                if threshold.is_some() {
                    c.onset_threshold = *threshold;
                }
                run.apply(&mut c);
            }
        }
        c.validate()?;
        Ok(c)
    }

    pub fn run(&self) -> anyhow::Result<()> {
        let cfg = self.resolve()?;
        let mut stdout = std::io::stdout().lock();
        match self.command {
            Command::Hopf { .. } => commands::hopf(&cfg, &mut stdout),
            Command::Expand { .. } => commands::expand(&cfg, &mut stdout),
            Command::Sigma2 { .. } => commands::sigma2(&cfg, &mut stdout),
            Command::Simulate { .. } => commands::simulate(&cfg, &mut stdout),
            Command::Scan { .. } => commands::scan(&cfg, &mut stdout),
        }
    }
}

/// Worker count from [`WORKERS_ENV`], if set.
pub fn workers_from_env() -> anyhow::Result<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(UsageError(format!(
                "{WORKERS_ENV} must be a positive integer, got {v:?}"
            ))
            .into()),
        },
        Err(_) => Ok(None),
    }
}

/// Process exit code for an error chain.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    use hopf_noise::Error as E;
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return EXIT_USAGE;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::Diverged { .. } => EXIT_DIVERGENCE,
                E::NoConvergence { .. } | E::NoOnsetInRange => EXIT_CONVERGENCE,
                E::LengthMismatch { .. } => 1,
                _ => EXIT_USAGE,
            };
        }
    }
    1
}
