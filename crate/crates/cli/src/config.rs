use std::path::{Path, PathBuf};

use anyhow::Context;
use hopf_noise::ExperimentConfig;
use serde::{Deserialize, Serialize};

use crate::UsageError;

/// Every setting a run depends on. Missing keys take the defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Feedback delay.
    pub tau: f64,
    /// Feedback gain of the sigmoid loop; sets κ and ν.
    pub gamma: f64,
    /// Sigmoid slope.
    pub slope: f64,
    pub dt: f64,
    pub n_steps: usize,
    /// Noise intensity D for `simulate`.
    pub noise: f64,
    /// Distance from threshold, η = η_c + ε, for `simulate` and `sigma2`.
    pub eps: f64,
    pub eps_min: f64,
    pub eps_max: f64,
    pub eps_step: f64,
    /// Noise intensities for `scan` and `sigma2`.
    pub noise_grid: Vec<f64>,
    pub n_trials: usize,
    pub seed: u64,
    /// Output directory; `simulate` and `scan` fall back to `results`.
    pub out: Option<PathBuf>,
    pub u_init: f64,
    pub window_fraction: f64,
    /// Keep every n-th step in trajectory files.
    pub decimation: usize,
    pub sigma2_horizon: f64,
    pub sigma2_realizations: usize,
    /// Amplitude that marks oscillation onset; defaults to `u_init`.
    pub onset_threshold: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let exp = ExperimentConfig::default();
        RunConfig {
            tau: 12.0,
            gamma: -0.05,
            slope: 60.0,
            dt: exp.dt,
            n_steps: exp.n_steps,
            noise: 1e-5,
            eps: -0.05,
            eps_min: -0.4,
            eps_max: 0.25,
            eps_step: 0.01,
            noise_grid: vec![0.0, 1e-5],
            n_trials: exp.n_trials,
            seed: exp.master_seed,
            out: None,
            u_init: exp.u_init,
            window_fraction: exp.window_fraction,
            decimation: 10,
            sigma2_horizon: exp.sigma2_horizon,
            sigma2_realizations: exp.sigma2_realizations,
            onset_threshold: None,
        }
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), UsageError> {
    if ok {
        Ok(())
    } else {
        Err(UsageError(msg()))
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        toml::from_str(text).map_err(|e| UsageError(format!("invalid config: {e}")).into())
    }

    pub fn to_toml(&self) -> anyhow::Result<String> {
        Ok(toml::to_string(self)?)
    }

    /// Read a TOML config, or the `config` section of a run manifest.
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let is_json =
            path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
        if is_json {
            let m: crate::manifest::Manifest = serde_json::from_str(&text)
                .map_err(|e| UsageError(format!("invalid manifest {}: {e}", path.display())))?;
            Ok(m.config)
        } else {
            Self::from_toml(&text)
        }
    }

    pub fn validate(&self) -> Result<(), UsageError> {
        let pos = |x: f64| x.is_finite() && x > 0.0;
        check(pos(self.tau), || {
            format!("tau must be positive, got {}", self.tau)
        })?;
        check(pos(self.dt), || {
            format!("dt must be positive, got {}", self.dt)
        })?;
        check(pos(self.slope), || {
            format!("slope must be positive, got {}", self.slope)
        })?;
        check(self.gamma.is_finite(), || "gamma must be finite".into())?;
        check(self.n_steps >= 1, || "n_steps must be at least 1".into())?;
        check(self.n_trials >= 1, || "n_trials must be at least 1".into())?;
        check(self.decimation >= 1, || {
            "decimation must be at least 1".into()
        })?;
        check(self.noise.is_finite() && self.noise >= 0.0, || {
            format!("noise must be >= 0, got {}", self.noise)
        })?;
        check(!self.noise_grid.is_empty(), || "noise_grid is empty".into())?;
        check(
            self.noise_grid.iter().all(|d| d.is_finite() && *d >= 0.0),
            || "noise_grid entries must be >= 0".into(),
        )?;
        check(pos(self.eps_step), || {
            format!("eps_step must be positive, got {}", self.eps_step)
        })?;
        check(self.eps_max >= self.eps_min, || {
            "eps_max must be >= eps_min".into()
        })?;
        check(
            self.window_fraction > 0.0 && self.window_fraction <= 0.5,
            || {
                format!(
                    "window_fraction must lie in (0, 0.5], got {}",
                    self.window_fraction
                )
            },
        )?;
        check(self.u_init.is_finite(), || "u_init must be finite".into())?;
        check(pos(self.sigma2_horizon), || {
            "sigma2_horizon must be positive".into()
        })?;
        Ok(())
    }

    /// `eps_min, eps_min + eps_step, ...` up to `eps_max`, snapped to 12 decimals.
    pub fn eps_grid(&self) -> Vec<f64> {
        let n = ((self.eps_max - self.eps_min) / self.eps_step + 1e-9).floor() as usize;
        (0..=n)
            .map(|i| ((self.eps_min + i as f64 * self.eps_step) * 1e12).round() / 1e12)
            .collect()
    }

    pub fn threshold(&self) -> f64 {
        self.onset_threshold.unwrap_or(self.u_init)
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("results"))
    }

    pub fn experiment(&self) -> ExperimentConfig {
        ExperimentConfig {
            dt: self.dt,
            n_steps: self.n_steps,
            n_trials: self.n_trials,
            master_seed: self.seed,
            u_init: self.u_init,
            window_fraction: self.window_fraction,
            sigma2_horizon: self.sigma2_horizon,
            sigma2_realizations: self.sigma2_realizations,
        }
    }
}
