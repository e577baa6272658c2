//! Ensemble Monte Carlo runs, amplitude readout and (ε, D) sweeps.
//!
//! All randomness is addressed by `(master seed, cell, trial)`. Trials run
//! in parallel but are reduced in index order, so results do not depend on
//! the number of worker threads.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{expand, ExpansionPoint};
use crate::noise_correction::{estimate_sigma2, NoiseCorrection, Sigma2Config, Sigma2Estimate};
use crate::seed::{derive_master, Seed};
use crate::spectrum::{solve_hopf, HopfPoint};
use crate::stats::CompensatedSum;
use crate::trajectory::{integrate, HistoryInit, SystemParams, SystemSpec, Trajectory};

/// Trials integrated per parallel batch before their samples are folded into
/// the running sums.
const BATCH: usize = 64;

/// Stream tag reserved for the σ² realizations.
const SIGMA2_TAG: u64 = u64::MAX;

/// Where amplitudes are read and how long the window must be.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeWindow {
    /// Trailing fraction of the samples, in (0, 0.5].
    pub fraction: f64,
    /// Minimum window duration in time units.
    pub min_time: f64,
}

impl AmplitudeWindow {
    /// Window that must hold at least three periods at the Hopf frequency.
    pub fn for_hopf(fraction: f64, hopf: &HopfPoint) -> Self {
        AmplitudeWindow {
            fraction,
            min_time: 3.0 * TAU / hopf.w_c,
        }
    }
}

/// Half the peak-to-peak excursion over the trailing window.
pub fn amplitude(traj: &Trajectory, window: &AmplitudeWindow) -> Result<f64> {
    amplitude_of(&traj.samples, traj.dt, window)
}

pub fn amplitude_of(samples: &[f64], dt: f64, window: &AmplitudeWindow) -> Result<f64> {
    if !(window.fraction > 0.0 && window.fraction <= 0.5) {
        return Err(Error::invalid(format!(
            "window fraction must lie in (0, 0.5], got {}",
            window.fraction
        )));
    }
    let count = ((samples.len() as f64) * window.fraction).ceil() as usize;
    let span = count.saturating_sub(1) as f64 * dt;
    if count < 2 || span < window.min_time {
        return Err(Error::WindowTooShort {
            got: span,
            needed: window.min_time,
        });
    }
    let tail = &samples[samples.len() - count..];
    let (lo, hi) = tail
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    Ok(0.5 * (hi - lo))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub n_trials: usize,
    pub n_steps: usize,
    pub dt: f64,
    pub master_seed: u64,
    /// When set, the amplitude of every trial is recorded.
    pub trial_amplitudes: Option<AmplitudeWindow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleResult {
    pub mean_trajectory: Trajectory,
    /// Pointwise standard error of the mean.
    pub std_error: Vec<f64>,
    pub n_trials: usize,
    pub master_seed: u64,
    pub per_trial_amplitudes: Option<Vec<f64>>,
    pub spec: SystemSpec,
}

/// Running shifted sums: values are accumulated relative to trial 0, which
/// keeps the mean exact when every trial is identical.
struct PointwiseAccumulator {
    reference: Vec<f64>,
    sum: Vec<CompensatedSum>,
    sum_sq: Vec<CompensatedSum>,
    count: usize,
}

impl PointwiseAccumulator {
    fn new(reference: Vec<f64>) -> Self {
        let n = reference.len();
        PointwiseAccumulator {
            reference,
            sum: vec![CompensatedSum::new(); n],
            sum_sq: vec![CompensatedSum::new(); n],
            count: 0,
        }
    }

    fn add(&mut self, samples: &[f64]) {
        for (k, (&x, &r)) in samples.iter().zip(&self.reference).enumerate() {
            let dx = x - r;
            self.sum[k].add(dx);
            self.sum_sq[k].add(dx * dx);
        }
        self.count += 1;
    }

    fn finish(self) -> (Vec<f64>, Vec<f64>) {
        let n = self.count as f64;
        let mut mean = Vec::with_capacity(self.reference.len());
        let mut se = Vec::with_capacity(self.reference.len());
        for ((r, s), s2) in self.reference.iter().zip(&self.sum).zip(&self.sum_sq) {
            let shift = s.value() / n;
            mean.push(r + shift);
            if self.count > 1 {
                let var = ((s2.value() - s.value() * shift) / (n - 1.0)).max(0.0);
                se.push((var / n).sqrt());
            } else {
                se.push(0.0);
            }
        }
        (mean, se)
    }
}

/// Pointwise mean of `n_trials` independent realizations.
///
/// Trial `i` uses noise stream `(master_seed, i)`. Without noise every trial
/// is the same deterministic run, so a single integration stands in for all
/// of them.
pub fn ensemble_average(
    spec: &SystemSpec,
    history: &HistoryInit,
    cfg: &EnsembleConfig,
) -> Result<EnsembleResult> {
    if cfg.n_trials < 1 {
        return Err(Error::invalid("an ensemble needs at least one trial"));
    }
    let run = |i: usize| {
        integrate(
            spec,
            history,
            cfg.n_steps,
            cfg.dt,
            Seed::new(cfg.master_seed, i as u64),
        )
        .map_err(|e| e.in_trial(i))
    };
    let amp_of = |t: &Trajectory| cfg.trial_amplitudes.map(|w| amplitude(t, &w)).transpose();

    if spec.noise == 0.0 {
        let tr = run(0)?;
        let amps = amp_of(&tr)?.map(|a| vec![a; cfg.n_trials]);
        let std_error = vec![0.0; tr.len()];
        return Ok(EnsembleResult {
            mean_trajectory: tr,
            std_error,
            n_trials: cfg.n_trials,
            master_seed: cfg.master_seed,
            per_trial_amplitudes: amps,
            spec: *spec,
        });
    }

    let mut acc: Option<PointwiseAccumulator> = None;
    let mut amps = cfg
        .trial_amplitudes
        .map(|_| Vec::with_capacity(cfg.n_trials));
    let mut first = 0;
    while first < cfg.n_trials {
        let last = (first + BATCH).min(cfg.n_trials);
        let batch: Vec<Trajectory> = (first..last)
            .into_par_iter()
            .map(run)
            .collect::<Result<_>>()?;
        for tr in &batch {
            let a = acc.get_or_insert_with(|| PointwiseAccumulator::new(tr.samples.clone()));
            a.add(&tr.samples);
            if let Some(v) = amps.as_mut() {
                v.push(amp_of(tr)?.unwrap_or(f64::NAN));
            }
        }
        first = last;
    }
    let (mean, std_error) = acc.expect("at least one trial").finish();

    Ok(EnsembleResult {
        mean_trajectory: Trajectory {
            t0: 0.0,
            dt: cfg.dt,
            samples: mean,
            seed: None,
        },
        std_error,
        n_trials: cfg.n_trials,
        master_seed: cfg.master_seed,
        per_trial_amplitudes: amps,
        spec: *spec,
    })
}

/// Expansion coefficients together with the Hopf point they are unfolded
/// around. Experiments sweep `η = η_c + ε` and keep κ, ν fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub expansion: ExpansionPoint,
    pub hopf: HopfPoint,
}

impl OperatingPoint {
    pub fn new(gamma: f64, slope: f64, tau: f64) -> Result<Self> {
        Ok(OperatingPoint {
            expansion: expand(gamma, slope)?,
            hopf: solve_hopf(tau)?,
        })
    }

    pub fn polynomial(&self, eps: f64, noise: f64) -> Result<SystemSpec> {
        SystemSpec::new(
            SystemParams::Polynomial {
                eta: self.hopf.eta_c + eps,
                kappa: self.expansion.kappa,
                nu: self.expansion.nu,
            },
            noise,
            self.hopf.tau,
        )
    }

    /// Deterministic corrected equation for a given correction.
    pub fn corrected(&self, correction: &NoiseCorrection) -> Result<SystemSpec> {
        SystemSpec::new(
            correction.system_params(&self.hopf, self.expansion.kappa, self.expansion.nu),
            0.0,
            self.hopf.tau,
        )
    }

    pub fn correction(&self, est: &Sigma2Estimate, eps: f64) -> Result<NoiseCorrection> {
        NoiseCorrection::from_estimate(est, self.expansion.kappa, self.expansion.nu, eps)
    }
}

/// Run settings shared by the comparison and sweep drivers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dt: f64,
    pub n_steps: usize,
    pub n_trials: usize,
    pub master_seed: u64,
    pub u_init: f64,
    pub window_fraction: f64,
    pub sigma2_horizon: f64,
    pub sigma2_realizations: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            dt: 0.1,
            n_steps: 10_000,
            n_trials: 500,
            master_seed: 0,
            u_init: crate::trajectory::DEFAULT_U_INIT,
            window_fraction: 0.25,
            sigma2_horizon: 1000.0,
            sigma2_realizations: 200,
        }
    }
}

impl ExperimentConfig {
    pub fn history(&self) -> HistoryInit {
        HistoryInit::Constant(self.u_init)
    }

    /// σ² settings. The stream does not depend on D, so estimates at
    /// different intensities share their underlying noise paths.
    pub fn sigma2_config(&self) -> Sigma2Config {
        Sigma2Config {
            horizon: self.sigma2_horizon,
            n_real: self.sigma2_realizations,
            dt: self.dt,
            master_seed: derive_master(self.master_seed, SIGMA2_TAG),
        }
    }

    pub fn window(&self, hopf: &HopfPoint) -> AmplitudeWindow {
        AmplitudeWindow::for_hopf(self.window_fraction, hopf)
    }

    fn ensemble(&self, master_seed: u64) -> EnsembleConfig {
        EnsembleConfig {
            n_trials: self.n_trials,
            n_steps: self.n_steps,
            dt: self.dt,
            master_seed,
            trial_amplitudes: None,
        }
    }
}

/// σ² for a noise level; zero intensity short-circuits to an exact zero.
pub fn sigma2_for(
    base: &OperatingPoint,
    noise: f64,
    cfg: &ExperimentConfig,
) -> Result<Sigma2Estimate> {
    estimate_sigma2(&base.hopf, noise, &cfg.sigma2_config())
}

/// Noise-free, ensemble-averaged and corrected runs at one (ε, D).
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub eps: f64,
    pub noise: f64,
    pub deterministic: Trajectory,
    pub ensemble: EnsembleResult,
    pub corrected: Trajectory,
    pub correction: NoiseCorrection,
}

pub fn compare(
    base: &OperatingPoint,
    eps: f64,
    noise: f64,
    cfg: &ExperimentConfig,
) -> Result<Comparison> {
    let est = sigma2_for(base, noise, cfg)?;
    compare_with(base, eps, &est, cfg)
}

/// [`compare`] with a precomputed σ² estimate.
pub fn compare_with(
    base: &OperatingPoint,
    eps: f64,
    est: &Sigma2Estimate,
    cfg: &ExperimentConfig,
) -> Result<Comparison> {
    let history = cfg.history();
    let seed = Seed::new(cfg.master_seed, 0);
    let deterministic = integrate(
        &base.polynomial(eps, 0.0)?,
        &history,
        cfg.n_steps,
        cfg.dt,
        seed,
    )?;
    let ensemble = ensemble_average(
        &base.polynomial(eps, est.noise)?,
        &history,
        &cfg.ensemble(cfg.master_seed),
    )?;
    let correction = base.correction(est, eps)?;
    let corrected = integrate(
        &base.corrected(&correction)?,
        &history,
        cfg.n_steps,
        cfg.dt,
        seed,
    )?;
    Ok(Comparison {
        eps,
        noise: est.noise,
        deterministic,
        ensemble,
        corrected,
        correction,
    })
}

/// Root-mean-square difference over the trailing `fraction` of two equal-length series.
pub fn tail_rms(a: &[f64], b: &[f64], fraction: f64) -> f64 {
    let n = a.len().min(b.len());
    let start = n - ((n as f64) * fraction).ceil() as usize;
    let ss: CompensatedSum = (start..n).map(|k| (a[k] - b[k]).powi(2)).collect();
    (ss.value() / (n - start) as f64).sqrt()
}

/// One (ε, D) cell of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub eps: f64,
    pub noise: f64,
    pub amp_noise_free: f64,
    pub amp_ensemble: f64,
    pub amp_corrected: f64,
    pub sigma2: f64,
    pub sigma2_se: f64,
    pub c_o: f64,
    pub mu: f64,
    pub eps_eff: f64,
    pub n_trials: usize,
    pub master_seed: u64,
    /// Failure description; amplitudes are NaN when set.
    pub error: Option<String>,
}

impl ScanRow {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }

    pub fn amplitude(&self, column: AmplitudeColumn) -> f64 {
        match column {
            AmplitudeColumn::NoiseFree => self.amp_noise_free,
            AmplitudeColumn::Ensemble => self.amp_ensemble,
            AmplitudeColumn::Corrected => self.amp_corrected,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmplitudeColumn {
    NoiseFree,
    Ensemble,
    Corrected,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub rows: Vec<ScanRow>,
}

impl ScanTable {
    pub fn at_noise(&self, noise: f64) -> impl Iterator<Item = &ScanRow> {
        self.rows.iter().filter(move |r| r.noise == noise)
    }

    pub fn failed(&self) -> impl Iterator<Item = &ScanRow> {
        self.rows.iter().filter(|r| !r.is_ok())
    }
}

fn check_grid(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid(format!("{name} grid is empty")));
    }
    let mut sorted = grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid(format!("{name} grid has duplicate values")));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid(format!("{name} grid has non-finite values")));
    }
    Ok(())
}

/// Sweep the control parameter and noise intensity.
///
/// σ² is estimated once per noise level. Cells that fail (for instance a
/// diverging trial) are flagged in their row and do not stop the sweep.
pub fn scan(
    eps_grid: &[f64],
    noise_grid: &[f64],
    base: &OperatingPoint,
    cfg: &ExperimentConfig,
) -> Result<ScanTable> {
    check_grid("eps", eps_grid)?;
    check_grid("noise", noise_grid)?;
    if noise_grid.iter().any(|&d| d < 0.0) {
        return Err(Error::invalid("noise intensities must be >= 0"));
    }
    let window = cfg.window(&base.hopf);
    let history = cfg.history();

    let estimates: Vec<Result<Sigma2Estimate>> = noise_grid
        .iter()
        .map(|&d| sigma2_for(base, d, cfg))
        .collect();

    let noise_free: Vec<Result<f64>> = eps_grid
        .par_iter()
        .map(|&eps| {
            let tr = integrate(
                &base.polynomial(eps, 0.0)?,
                &history,
                cfg.n_steps,
                cfg.dt,
                Seed::new(cfg.master_seed, 0),
            )?;
            amplitude(&tr, &window)
        })
        .collect();

    let n_eps = eps_grid.len();
    let cells: Vec<(usize, usize)> = (0..noise_grid.len())
        .flat_map(|i| (0..n_eps).map(move |j| (i, j)))
        .collect();

    let rows = cells
        .par_iter()
        .map(|&(i, j)| {
            let (eps, noise) = (eps_grid[j], noise_grid[i]);
            let mut row = ScanRow {
                eps,
                noise,
                amp_noise_free: f64::NAN,
                amp_ensemble: f64::NAN,
                amp_corrected: f64::NAN,
                sigma2: f64::NAN,
                sigma2_se: f64::NAN,
                c_o: f64::NAN,
                mu: f64::NAN,
                eps_eff: f64::NAN,
                n_trials: cfg.n_trials,
                master_seed: cfg.master_seed,
                error: None,
            };
            let cell_seed = derive_master(cfg.master_seed, (i * n_eps + j) as u64);
            let outcome = (|| -> Result<()> {
                let est = estimates[i].clone()?;
                let corr = base.correction(&est, eps)?;
                row.sigma2 = est.sigma2;
                row.sigma2_se = est.std_error;
                row.c_o = corr.c_o;
                row.mu = corr.mu;
                row.eps_eff = corr.eps_eff;
                let nf = noise_free[j].clone()?;
                let ens = ensemble_average(
                    &base.polynomial(eps, noise)?,
                    &history,
                    &cfg.ensemble(cell_seed),
                )?;
                let amp_ens = amplitude(&ens.mean_trajectory, &window)?;
                let corrected = integrate(
                    &base.corrected(&corr)?,
                    &history,
                    cfg.n_steps,
                    cfg.dt,
                    Seed::new(cell_seed, 0),
                )?;
                let amp_corr = amplitude(&corrected, &window)?;
                row.amp_noise_free = nf;
                row.amp_ensemble = amp_ens;
                row.amp_corrected = amp_corr;
                Ok(())
            })();
            if let Err(e) = outcome {
                log::warn!("scan cell (eps = {eps}, D = {noise:e}) failed: {e}");
                row.amp_noise_free = f64::NAN;
                row.amp_ensemble = f64::NAN;
                row.amp_corrected = f64::NAN;
                row.error = Some(e.to_string());
            }
            row
        })
        .collect();

    Ok(ScanTable { rows })
}

/// Largest ε at which the chosen amplitude reaches `threshold`, linearly
/// interpolated between the bracketing grid cells.
///
/// Oscillations live below the threshold in ε, so the rows at `noise` are
/// walked downward from the largest ε.
pub fn onset_locator(
    rows: &[ScanRow],
    noise: f64,
    column: AmplitudeColumn,
    threshold: f64,
) -> Result<f64> {
    let mut cells: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.noise == noise && r.is_ok())
        .map(|r| (r.eps, r.amplitude(column)))
        .collect();
    cells.sort_by(|a, b| b.0.total_cmp(&a.0));
    let first_above = cells
        .iter()
        .position(|&(_, a)| a >= threshold)
        .ok_or(Error::NoOnsetInRange)?;
    if first_above == 0 {
        // already oscillating at the top of the range: onset not bracketed
        return Err(Error::NoOnsetInRange);
    }
    let (e_hi, a_hi) = cells[first_above - 1];
    let (e_lo, a_lo) = cells[first_above];
    Ok(e_lo + (threshold - a_lo) * (e_hi - e_lo) / (a_hi - a_lo))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window() -> AmplitudeWindow {
        AmplitudeWindow {
            fraction: 0.25,
            min_time: 3.0 * TAU / 0.242,
        }
    }

    fn traj(samples: Vec<f64>, dt: f64) -> Trajectory {
        Trajectory {
            t0: 0.0,
            dt,
            samples,
            seed: None,
        }
    }

    #[test]
    fn amplitude_of_constant_is_zero() {
        let t = traj(vec![0.3; 10_001], 0.1);
        assert_eq!(amplitude(&t, &window()).unwrap(), 0.0);
    }

    #[test]
    fn amplitude_of_sine() {
        let t = traj(
            (0..=10_000)
                .map(|k| 0.02 * (0.242 * k as f64 * 0.1).sin())
                .collect(),
            0.1,
        );
        let a = amplitude(&t, &window()).unwrap();
        assert!((a - 0.02).abs() / 0.02 < 0.01, "{a}");
    }

    #[test]
    fn amplitude_of_decayed_transient() {
        let t = traj(
            (0..=10_000)
                .map(|k| {
                    let s = k as f64 * 0.01;
                    (-s).exp() * s.cos()
                })
                .collect(),
            0.01,
        );
        let w = AmplitudeWindow {
            fraction: 0.25,
            min_time: 3.0 * TAU,
        };
        assert!(amplitude(&t, &w).unwrap() < 0.01);
    }

    #[test]
    fn amplitude_window_checks() {
        let t = traj(vec![0.0; 1001], 0.1);
        assert!(matches!(
            amplitude(&t, &window()),
            Err(Error::WindowTooShort { .. })
        ));
        let w = AmplitudeWindow {
            fraction: 0.6,
            min_time: 0.0,
        };
        assert!(matches!(amplitude(&t, &w), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn compensated_mean_is_exact_for_identical_trials() {
        let r = vec![0.1, -0.2, 1.0 / 3.0];
        let mut acc = PointwiseAccumulator::new(r.clone());
        for _ in 0..7 {
            acc.add(&r);
        }
        let (m, se) = acc.finish();
        assert_eq!(m, r);
        assert_eq!(se, vec![0.0; 3]);
    }

    fn row(eps: f64, noise: f64, amp: f64) -> ScanRow {
        ScanRow {
            eps,
            noise,
            amp_noise_free: amp,
            amp_ensemble: amp,
            amp_corrected: amp,
            sigma2: 0.0,
            sigma2_se: 0.0,
            c_o: 0.0,
            mu: 0.0,
            eps_eff: eps,
            n_trials: 1,
            master_seed: 0,
            error: None,
        }
    }

    #[test]
    fn onset_interpolates_between_bracketing_cells() {
        let rows: Vec<ScanRow> = [
            (0.1, 0.0),
            (0.05, 0.001),
            (0.0, 0.004),
            (-0.05, 0.02),
            (-0.1, 0.03),
        ]
        .iter()
        .map(|&(e, a)| row(e, 0.0, a))
        .collect();
        let e = onset_locator(&rows, 0.0, AmplitudeColumn::Ensemble, 0.012).unwrap();
        assert!((e - (-0.025)).abs() < 1e-12, "{e}");
        // order of rows does not matter
        let mut rev = rows.clone();
        rev.reverse();
        assert_eq!(
            onset_locator(&rev, 0.0, AmplitudeColumn::Ensemble, 0.012).unwrap(),
            e
        );
        assert_eq!(
            onset_locator(&rows, 0.0, AmplitudeColumn::Ensemble, 1.0),
            Err(Error::NoOnsetInRange)
        );
        assert_eq!(
            onset_locator(&rows, 0.0, AmplitudeColumn::Ensemble, 0.0),
            Err(Error::NoOnsetInRange)
        );
        assert_eq!(
            onset_locator(&rows, 1e-5, AmplitudeColumn::Ensemble, 0.01),
            Err(Error::NoOnsetInRange)
        );
    }

    #[test]
    fn failed_rows_are_skipped_by_onset() {
        let mut rows: Vec<ScanRow> = [(0.0, 0.001), (-0.1, 0.02), (-0.2, 0.03)]
            .iter()
            .map(|&(e, a)| row(e, 0.0, a))
            .collect();
        rows[1].error = Some("diverged".into());
        rows[1].amp_ensemble = f64::NAN;
        let e = onset_locator(&rows, 0.0, AmplitudeColumn::Ensemble, 0.0155).unwrap();
        assert!((e - (-0.1)).abs() < 1e-12);
    }

    #[test]
    fn tail_rms_of_offset() {
        let a = vec![0.0; 100];
        let b: Vec<f64> = (0..100)
            .map(|k| if k >= 50 { 2.0 } else { 100.0 })
            .collect();
        assert_eq!(tail_rms(&a, &b, 0.5), 2.0);
    }

    #[test]
    fn grids_are_validated() {
        let base = OperatingPoint::new(-0.05, 60.0, 12.0).unwrap();
        let cfg = ExperimentConfig::default();
        assert!(scan(&[], &[0.0], &base, &cfg).is_err());
        assert!(scan(&[0.1, 0.1], &[0.0], &base, &cfg).is_err());
        assert!(scan(&[0.1], &[-1e-5], &base, &cfg).is_err());
    }
}
