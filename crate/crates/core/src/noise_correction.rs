//! Noise-induced corrections to the cubic delay equation near the Hopf point.
//!
//! The fast stable-subspace fluctuation `h_t` is driven by the linear
//! critical equation `H' = -H + η_c H_τ + sqrt(2D) ξ(t)`. Averaging the
//! cubic nonlinearity over a zero-mean Gaussian `h_t` of variance σ² gives a
//! constant drift `c_o = κ σ²` and a shift of the control parameter
//! `μ = 3 ν σ²`, so the effective distance from threshold is `ε* = ε + μ`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::Seed;
use crate::spectrum::{pairing, HopfPoint};
use crate::stats::{mean_and_se, skewness, CompensatedSum};
use crate::trajectory::{delay_steps, integrate, HistoryInit, SystemParams, SystemSpec};

/// Skewness beyond which the Gaussian assumption on `h_t` is flagged in the log.
pub const SKEWNESS_WARN: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sigma2Config {
    /// Simulated time per realization; statistics use its last half.
    pub horizon: f64,
    pub n_real: usize,
    pub dt: f64,
    pub master_seed: u64,
}

impl Default for Sigma2Config {
    fn default() -> Self {
        Sigma2Config {
            horizon: 1000.0,
            n_real: 200,
            dt: 0.1,
            master_seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sigma2Method {
    /// `(1 - 2 Re(d) cos(w_c τ))² ⟨H²⟩`
    Formula,
    /// Direct variance of `h_t(0) = H(t) - 2 Re z₁(t)`.
    Projection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sigma2Estimate {
    pub noise: f64,
    pub sigma2: f64,
    /// Standard error across realizations.
    pub std_error: f64,
    pub method: Sigma2Method,
    pub horizon: f64,
    pub n_real: usize,
    /// Start time of the averaging window.
    pub window_start: f64,
    /// Mean per-realization skewness of the averaged variable.
    pub skewness: f64,
}

/// `1 - 2 Re(d) cos(w_c τ)`, with the cosine taken as `1/η_c`.
pub fn projection_factor(hopf: &HopfPoint) -> f64 {
    1.0 - 2.0 * hopf.d.re / hopf.eta_c
}

fn check_config(hopf: &HopfPoint, noise: f64, cfg: &Sigma2Config) -> Result<(usize, usize)> {
    if !(noise.is_finite() && noise >= 0.0) {
        return Err(Error::invalid(format!(
            "noise intensity must be >= 0, got {noise}"
        )));
    }
    if cfg.horizon.is_nan() || cfg.horizon < 10.0 * hopf.tau {
        return Err(Error::invalid(format!(
            "horizon {} is shorter than ten delays ({})",
            cfg.horizon,
            10.0 * hopf.tau
        )));
    }
    if cfg.n_real < 10 {
        return Err(Error::invalid(format!(
            "at least 10 realizations are needed, got {}",
            cfg.n_real
        )));
    }
    let n_lag = delay_steps(hopf.tau, cfg.dt)?;
    let n_steps = (cfg.horizon / cfg.dt).round() as usize;
    Ok((n_lag, n_steps))
}

fn linear_critical(hopf: &HopfPoint, noise: f64) -> Result<SystemSpec> {
    SystemSpec::new(
        SystemParams::LinearCritical { eta_c: hopf.eta_c },
        noise,
        hopf.tau,
    )
}

/// Per-realization statistic and its skewness, in realization order.
fn per_realization<F>(
    hopf: &HopfPoint,
    noise: f64,
    cfg: &Sigma2Config,
    n_steps: usize,
    stat: F,
) -> Result<Vec<(f64, f64)>>
where
    F: Fn(&[f64]) -> (f64, f64) + Sync,
{
    let spec = linear_critical(hopf, noise)?;
    (0..cfg.n_real)
        .into_par_iter()
        .map(|r| {
            let tr = integrate(
                &spec,
                &HistoryInit::Constant(0.0),
                n_steps,
                cfg.dt,
                Seed::new(cfg.master_seed, r as u64),
            )
            .map_err(|e| e.in_trial(r))?;
            Ok(stat(&tr.samples))
        })
        .collect()
}

fn summarize(
    rows: Vec<(f64, f64)>,
    scale: f64,
    noise: f64,
    method: Sigma2Method,
    cfg: &Sigma2Config,
    window_start: f64,
) -> Sigma2Estimate {
    let values: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let skews: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let (m, se) = mean_and_se(&values);
    let skew = mean_and_se(&skews).0;
    if skew.abs() > SKEWNESS_WARN {
        log::warn!("h_t skewness {skew:.3} exceeds {SKEWNESS_WARN} at D = {noise:e}");
    } else {
        log::debug!("h_t skewness {skew:.3} at D = {noise:e}");
    }
    Sigma2Estimate {
        noise,
        sigma2: scale * m,
        std_error: scale * se,
        method,
        horizon: cfg.horizon,
        n_real: cfg.n_real,
        window_start,
        skewness: skew,
    }
}

/// Estimate σ²(D) from the stationary second moment of the linear critical
/// equation, `σ² ≈ (1 - 2 Re(d) cos(w_c τ))² ⟨H²⟩`.
///
/// `⟨H²⟩` is the time average over the last half of the horizon, averaged
/// over `n_real` independent realizations started from a zero history.
pub fn estimate_sigma2(hopf: &HopfPoint, noise: f64, cfg: &Sigma2Config) -> Result<Sigma2Estimate> {
    let (_, n_steps) = check_config(hopf, noise, cfg)?;
    let start = n_steps / 2;
    let rows = per_realization(hopf, noise, cfg, n_steps, |h| {
        let w = &h[start..];
        let sq: CompensatedSum = w.iter().map(|x| x * x).collect();
        (sq.value() / w.len() as f64, skewness(w))
    })?;
    let factor = projection_factor(hopf);
    Ok(summarize(
        rows,
        factor * factor,
        noise,
        Sigma2Method::Formula,
        cfg,
        start as f64 * cfg.dt,
    ))
}

/// Estimate σ²(D) as the variance of the projected stable remainder
/// `h_t(0, t)` over the same window as [`estimate_sigma2`].
pub fn estimate_sigma2_direct(
    hopf: &HopfPoint,
    noise: f64,
    cfg: &Sigma2Config,
) -> Result<Sigma2Estimate> {
    let (n_lag, n_steps) = check_config(hopf, noise, cfg)?;
    let start = (n_steps / 2).max(n_lag);
    let proj = CenterProjector::new(hopf, cfg.dt)?;
    let rows = per_realization(hopf, noise, cfg, n_steps, |h| {
        let rem: Vec<f64> = (start..h.len())
            .map(|k| proj.stable_remainder(&h[k - n_lag..=k]))
            .collect();
        let sq: CompensatedSum = rem.iter().map(|x| x * x).collect();
        (sq.value() / rem.len() as f64, skewness(&rem))
    })?;
    Ok(summarize(
        rows,
        1.0,
        noise,
        Sigma2Method::Projection,
        cfg,
        start as f64 * cfg.dt,
    ))
}

/// Center-subspace coordinates of a delay segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterProjection {
    pub z1: Complex64,
    pub z2: Complex64,
    /// `H(t) - z₁ - z₂`, the stable part at θ = 0.
    pub stable_remainder: Complex64,
}

/// Precomputed adjoint samples for repeated projections on a fixed grid.
#[derive(Debug, Clone)]
pub struct CenterProjector {
    psi1: Vec<Complex64>,
    psi2: Vec<Complex64>,
    eta_c: f64,
    dt: f64,
}

impl CenterProjector {
    pub fn new(hopf: &HopfPoint, dt: f64) -> Result<Self> {
        let n_lag = delay_steps(hopf.tau, dt)?;
        let psi1: Vec<Complex64> = (0..=n_lag).map(|j| hopf.psi1(j as f64 * dt)).collect();
        let psi2 = psi1.iter().map(|z| z.conj()).collect();
        Ok(CenterProjector {
            psi1,
            psi2,
            eta_c: hopf.eta_c,
            dt,
        })
    }

    pub fn segment_len(&self) -> usize {
        self.psi1.len()
    }

    fn check(&self, got: usize) -> Result<()> {
        if got != self.psi1.len() {
            return Err(Error::LengthMismatch {
                expected: self.psi1.len(),
                got,
            });
        }
        Ok(())
    }

    /// Project a (possibly complex) segment sampled on `[t - τ, t]`.
    pub fn project<T>(&self, segment: &[T]) -> Result<CenterProjection>
    where
        T: Copy + Into<Complex64>,
    {
        self.check(segment.len())?;
        let z1 = pairing(&self.psi1, segment, self.eta_c, self.dt);
        let z2 = pairing(&self.psi2, segment, self.eta_c, self.dt);
        let now: Complex64 = segment[segment.len() - 1].into();
        Ok(CenterProjection {
            z1,
            z2,
            stable_remainder: now - z1 - z2,
        })
    }

    /// `h_t(0) = H(t) - 2 Re z₁` for a real segment; lengths must match.
    #[inline]
    fn stable_remainder(&self, segment: &[f64]) -> f64 {
        let z1 = pairing(&self.psi1, segment, self.eta_c, self.dt);
        segment[segment.len() - 1] - 2.0 * z1.re
    }
}

/// Project a real delay segment `H(t + θ)`, θ ∈ [-τ, 0], onto the center
/// subspace.
pub fn project_center(segment: &[f64], hopf: &HopfPoint, dt: f64) -> Result<CenterProjection> {
    CenterProjector::new(hopf, dt)?.project(segment)
}

/// Parameters of the noise-corrected equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseCorrection {
    /// Noise intensity, when the correction came from an estimate.
    pub noise: Option<f64>,
    pub sigma2: f64,
    /// κ σ²
    pub c_o: f64,
    /// 3 ν σ²
    pub mu: f64,
    pub eps: f64,
    /// ε + μ
    pub eps_eff: f64,
    pub estimate: Option<Sigma2Estimate>,
}

pub fn effective_params(sigma2: f64, kappa: f64, nu: f64, eps: f64) -> Result<NoiseCorrection> {
    if !(sigma2.is_finite() && sigma2 >= 0.0) {
        return Err(Error::invalid(format!(
            "variance must be >= 0, got {sigma2}"
        )));
    }
    let mu = 3.0 * nu * sigma2;
    Ok(NoiseCorrection {
        noise: None,
        sigma2,
        c_o: kappa * sigma2,
        mu,
        eps,
        eps_eff: eps + mu,
        estimate: None,
    })
}

impl NoiseCorrection {
    pub fn from_estimate(est: &Sigma2Estimate, kappa: f64, nu: f64, eps: f64) -> Result<Self> {
        let mut c = effective_params(est.sigma2, kappa, nu, eps)?;
        c.noise = Some(est.noise);
        c.estimate = Some(*est);
        Ok(c)
    }

    /// Coefficients of the corrected equation around the Hopf point.
    pub fn system_params(&self, hopf: &HopfPoint, kappa: f64, nu: f64) -> SystemParams {
        SystemParams::Corrected {
            eta_c: hopf.eta_c,
            eps_eff: self.eps_eff,
            kappa,
            nu,
            c_o: self.c_o,
        }
    }
}
